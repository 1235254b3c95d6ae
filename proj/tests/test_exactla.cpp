#include <doctest.h>

#include <random>

#include "birsym/exactla.hpp"
#include "birsym/relations.hpp"
#include "oracles.hpp"

using namespace birsym;

namespace {

SparseMatrix random_matrix(std::mt19937& rng, std::size_t rows, std::size_t cols, double density, int range) {
  SparseMatrix m(cols);
  std::uniform_real_distribution<double> u(0, 1);
  for (std::size_t i = 0; i < rows; ++i) {
    SparseRow row;
    for (std::uint32_t j = 0; j < cols; ++j)
      if (u(rng) < density) row.push_back({j, static_cast<std::int64_t>(rng() % (2 * range + 1)) - range});
    m.add_row(row);
  }
  return m;
}

// Rank-deficient integer matrix: products of random thin factors.
SparseMatrix low_rank(std::mt19937& rng, std::size_t rows, std::size_t cols, std::size_t rank) {
  oracle::Mat a(rows, oracle::Vec(rank)), b(rank, oracle::Vec(cols));
  for (auto& r : a)
    for (auto& x : r) x = static_cast<std::int64_t>(rng() % 5) - 2;
  for (auto& r : b)
    for (auto& x : r) x = static_cast<std::int64_t>(rng() % 5) - 2;
  SparseMatrix m(cols);
  for (std::size_t i = 0; i < rows; ++i) {
    SparseRow row;
    for (std::uint32_t j = 0; j < cols; ++j) {
      std::int64_t s = 0;
      for (std::size_t k = 0; k < rank; ++k) s += a[i][k] * b[k][j];
      if (s) row.push_back({j, s});
    }
    m.add_row(row);
  }
  return m;
}

EliminationOptions sparse_only() {
  EliminationOptions o;
  o.dense_density = 2.0;
  o.dense_small_cols = 0;
  return o;
}

EliminationOptions dense_at_once() {
  EliminationOptions o;
  o.dense_small_cols = 1u << 20;
  return o;
}

}  // namespace

TEST_CASE("primes") {
  for (std::uint64_t n = 0; n < 5000; ++n) {
    bool trial = n >= 2;
    for (std::uint64_t d = 2; d * d <= n && trial; ++d) trial = n % d != 0;
    CHECK(is_prime(n) == trial);
  }
  CHECK(is_prime(2147483647ULL));
  CHECK_FALSE(is_prime(2147483647ULL * 3));
  const auto a = pick_primes(4, 9, 30);
  CHECK(a == pick_primes(4, 9, 30));
  CHECK(a != pick_primes(4, 10, 30));
  for (auto p : a) {
    CHECK(is_prime(p));
    CHECK(p > (1u << 30));
  }
  CHECK(inverse_mod(3, 7) == 5);
  CHECK(reduce_mod(-1, 7) == 6);
}

TEST_CASE("rank_mod_p: documented examples") {
  const auto m = build_relations(AbelianGroup::cyclic(5), 2, Flavor::M, {2});
  CHECK(rank_mod_p(m.matrix(), 2) == 9);
  SparseMatrix zero(4);
  zero.add_row({});
  zero.add_row({});
  CHECK(rank_mod_p(zero, 7) == 0);
  SparseMatrix id(3);
  for (std::uint32_t i = 0; i < 3; ++i) id.add_row({{i, 1}});
  CHECK(rank_mod_p(id, 7) == 3);
  CHECK_THROWS_AS(rank_mod_p(id, 8), Error);
}

TEST_CASE("rank_mod_p agrees with dense elimination on both code paths") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t rows = 1 + rng() % 30, cols = 1 + rng() % 30;
    const double density = trial % 3 == 0 ? 0.5 : 0.1;
    const auto m = trial % 2 ? random_matrix(rng, rows, cols, density, 3) : low_rank(rng, rows, cols, 1 + rng() % 6);
    const auto d = m.to_dense();
    for (std::uint32_t p : {2u, 3u, 7u, 1000003u}) {
      const auto want = oracle::rank_mod(d, p);
      CHECK(rank_mod_p(m, p) == want);
      CHECK(rank_mod_p(m, p, sparse_only()) == want);
      CHECK(rank_mod_p(m, p, dense_at_once()) == want);
    }
  }
}

TEST_CASE("rank_q equals the exact rational rank") {
  std::mt19937 rng(6);
  const auto primes = pick_primes(3, 1);
  for (int trial = 0; trial < 60; ++trial) {
    const auto m = low_rank(rng, 2 + rng() % 20, 2 + rng() % 20, 1 + rng() % 8);
    const auto report = rank_q(m, primes);
    CHECK(report.rank == oracle::rank_q(m.to_dense()));
    CHECK(report.agree);
    CHECK(report.per_prime.size() == 3);
    CHECK(rank_q(m, primes, {}, 3).rank == report.rank);
  }
  CHECK_THROWS_AS(rank_q(SparseMatrix(2), {}), Error);
}

TEST_CASE("ModpEchelon: reduction, projection and membership") {
  std::mt19937 rng(8);
  EliminationOptions keep;
  keep.keep_pivots = true;
  for (int trial = 0; trial < 60; ++trial) {
    const auto m = low_rank(rng, 3 + rng() % 12, 3 + rng() % 12, 1 + rng() % 4);
    const std::uint32_t p = 1000003;
    const ModpEchelon ech(m, p, keep);
    CHECK(ech.rank() == oracle::rank_mod(m.to_dense(), p));
    CHECK(ech.rank() + ech.free_cols().size() == m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r) {
      CHECK(ech.in_rowspan(m.row(r)));
      const auto coords = ech.project(m.row(r));
      CHECK(std::all_of(coords.begin(), coords.end(), [](std::uint32_t x) { return x == 0; }));
    }
    SparseRow v;
    for (std::uint32_t j = 0; j < m.cols(); ++j)
      if (rng() % 3 == 0) v.push_back({j, static_cast<std::int64_t>(rng() % 7) - 3});
    auto d = m.to_dense();
    oracle::Vec dv(m.cols(), 0);
    for (const auto& e : v) dv[e.col] = e.value;
    const bool want = oracle::rank_mod(d, p) == [&] {
      d.push_back(dv);
      return oracle::rank_mod(d, p);
    }();
    CHECK(ech.in_rowspan(v) == want);
    CHECK(in_rowspan_q(m, v, {p, 998244353}) == want);
    // projection is linear and kills the span: proj(v + row) = proj(v)
    if (m.rows()) {
      SparseRow w = v;
      for (const auto& e : m.row(0)) w.push_back(e);
      normalize_row(w);
      CHECK(ech.project(w) == ech.project(v));
    }
  }
  const ModpEchelon plain(SparseMatrix(3), 7);
  CHECK_THROWS_AS(plain.project(SparseRow{{0, 1}}), Error);
}

TEST_CASE("IntegerQuotient torsion matches gcds of minors") {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 80; ++trial) {
    const auto m = random_matrix(rng, 1 + rng() % 5, 1 + rng() % 5, 0.7, 6);
    const auto d = m.to_dense();
    const IntegerQuotient q(m);
    CHECK(q.torsion() == oracle::snf_by_minors(d));
    CHECK(q.free_rank() == m.cols() - oracle::rank_q(d));
    CHECK(snf(m) == q.torsion());
  }
}

TEST_CASE("element order is the ratio of torsion orders") {
  std::mt19937 rng(10);
  auto torsion_order = [](const std::vector<mpz_class>& t) {
    mpz_class x = 1;
    for (const auto& d : t) x *= d;
    return x;
  };
  for (int trial = 0; trial < 80; ++trial) {
    const auto m = random_matrix(rng, 2 + rng() % 4, 1 + rng() % 4, 0.8, 5);
    SparseRow v;
    for (std::uint32_t j = 0; j < m.cols(); ++j) v.push_back({j, static_cast<std::int64_t>(rng() % 5) - 2});
    normalize_row(v);
    SparseMatrix with = m;
    with.add_row(v);
    const auto d = m.to_dense(), dw = with.to_dense();
    const IntegerQuotient q(m);
    const auto order = q.order(v);
    if (oracle::rank_q(dw) > oracle::rank_q(d)) {
      CHECK_FALSE(order.has_value());
    } else {
      REQUIRE(order.has_value());
      CHECK(*order == torsion_order(oracle::snf_by_minors(d)) / torsion_order(oracle::snf_by_minors(dw)));
      CHECK(element_order(m, v) == order);
      CHECK(q.contains(v) == (*order == 1));
      CHECK(in_rowspan_z(m, v) == (*order == 1));
    }
  }
}

TEST_CASE("support closure and restricted quotients") {
  SparseMatrix m(6);
  m.add_row({{0, 1}, {1, 2}});
  m.add_row({{1, 1}, {2, 1}});
  m.add_row({{4, 3}, {5, 1}});
  const SparseRow seed{{0, 1}};
  CHECK(support_closure(m, seed) == std::vector<std::uint32_t>{0, 1, 2});
  const IntegerQuotient restricted(m, std::vector<std::uint32_t>{0, 1, 2});
  CHECK(restricted.free_rank() == 1);
  CHECK(!restricted.order(seed).has_value());
  const SparseRow w{{0, 1}, {1, -2}, {2, 2}};
  CHECK(restricted.contains(SparseRow{{0, 1}, {1, 2}}));
  CHECK(restricted.contains(SparseRow{{0, 1}, {1, 3}, {2, 1}}));
  CHECK_FALSE(restricted.contains(w));
}

TEST_CASE("B_2(Z/37) has 3- and 19-torsion") {
  const auto b = build_relations(AbelianGroup::cyclic(37), 2, Flavor::B, {2});
  const auto t = snf(b.matrix());
  mpz_class prod = 1;
  for (const auto& d : t) prod *= d;
  CHECK(prod % 3 == 0);
  CHECK(prod % 19 == 0);
}

TEST_CASE("charpoly over F_p matches determinant interpolation") {
  std::mt19937 rng(12);
  const std::uint32_t p = 1000003;
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + rng() % 7;
    DenseModMatrix a(n, std::vector<std::uint32_t>(n));
    oracle::Mat o(n, oracle::Vec(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const std::uint32_t x = (trial % 2 && rng() % 2) ? 0 : rng() % 9;
        a[i][j] = x;
        o[i][j] = x;
      }
    const auto got = charpoly_mod_p(a, p);
    const auto want = oracle::charpoly_by_interpolation(o, p);
    REQUIRE(got.size() == want.size());
    for (std::size_t k = 0; k < got.size(); ++k) CHECK(static_cast<std::int64_t>(got[k]) == want[k]);
    const auto sq = multiply_mod_p(a, a, p);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        std::uint64_t s = 0;
        for (std::size_t k = 0; k < n; ++k) s = (s + static_cast<std::uint64_t>(a[i][k]) * a[k][j]) % p;
        CHECK(sq[i][j] == s);
      }
  }
}
