#include <doctest.h>

#include <random>
#include <set>

#include "birsym/hecke.hpp"
#include "oracles.hpp"

using namespace birsym;

namespace {

const std::vector<std::uint32_t> kPrimes = {1000003, 998244353};

SymbolVector image_of(const HeckeMatrix& h, std::uint32_t col) {
  SymbolVector v;
  for (const auto& e : h.images.row(col)) v.add(e.col, e.value);
  return v;
}

// Solves x = sum lambda_i g_i in doubles and tests lambda >= 0.
bool inside(const SimplicialCone& cone, const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::vector<double>> a(n, std::vector<double>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = static_cast<double>(cone.generators[j][i]);
    a[i][n] = x[i] * static_cast<double>(cone.denominator);
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t i = c; i < n; ++i)
      if (std::abs(a[i][c]) > std::abs(a[piv][c])) piv = i;
    std::swap(a[c], a[piv]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c) continue;
      const double f = a[i][c] / a[c][c];
      for (std::size_t j = c; j <= n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (a[i][n] / a[i][i] < 0) return false;
  return true;
}

}  // namespace

TEST_CASE("Gaussian binomials count subspaces") {
  for (int q : {2, 3})
    for (int n = 1; n <= 3; ++n)
      for (int r = 1; r <= n; ++r) CHECK(gaussian_binomial(n, r, q) == oracle::subspaces_by_enumeration(n, r, q));
  CHECK(gaussian_binomial(4, 2, 2) == oracle::subspaces_by_enumeration(4, 2, 2));
  CHECK(gaussian_binomial(4, 2, 2) == 35);
}

TEST_CASE("overlattices and sublattices") {
  // L contains v iff adding v does not change L
  auto contains = [](const Lattice& l, IntVector v) {
    IntMatrix gens = l.basis;
    for (auto& x : v) x *= l.denominator;
    gens.push_back(v);
    return make_lattice(gens, l.denominator) == l;
  };
  for (int n = 1; n <= 3; ++n)
    for (int ell : {2, 3})
      for (int r = 1; r <= n; ++r) {
        const auto over = enumerate_overlattices(n, ell, r);
        const auto sub = enumerate_sublattices(n, ell, r);
        CHECK(static_cast<std::int64_t>(over.size()) == gaussian_binomial(n, r, ell));
        CHECK(static_cast<std::int64_t>(sub.size()) == gaussian_binomial(n, r, ell));
        std::int64_t idx = 1;
        for (int i = 0; i < r; ++i) idx *= ell;
        const auto z = standard_lattice(n);
        std::set<std::pair<IntMatrix, std::int64_t>> distinct;
        for (const auto& l : over) {
          CHECK(lattice_index(l, z) == idx);
          for (int i = 0; i < n; ++i) {
            IntVector e(n, 0);
            e[i] = 1;
            CHECK(contains(l, e));
          }
          for (const auto& row : l.basis)
            for (auto x : row) CHECK((ell * x) % l.denominator == 0);
          distinct.insert({l.basis, l.denominator});
        }
        for (const auto& l : sub) {
          CHECK(lattice_index(z, l) == idx);
          for (const auto& row : l.basis)
            for (auto x : row) CHECK(x % l.denominator == 0);
          for (int i = 0; i < n; ++i) {
            IntVector e(n, 0);
            e[i] = ell;
            CHECK(contains(l, e));
          }
          distinct.insert({l.basis, l.denominator});
        }
        CHECK(distinct.size() == over.size() + sub.size());
      }
}

TEST_CASE("Hermite form makes lattices comparable") {
  const auto a = make_lattice({{2, 0}, {1, 1}}, 2);
  const auto b = make_lattice({{1, 1}, {3, 1}, {0, 2}}, 2);
  CHECK(a == b);
  CHECK(lattice_index(standard_lattice(2), make_lattice({{2, 0}, {0, 3}}, 1)) == 6);
  CHECK_THROWS_AS(make_lattice({{1, 1}, {2, 2}}, 1), Error);
}

TEST_CASE("subdivisions are basic and tile the octant") {
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (int n = 2; n <= 3; ++n)
    for (int ell : {2, 3, 5}) {
      const auto lattices = enumerate_overlattices(n, ell, 1);
      const auto subs = enumerate_sublattices(n, ell, n == 3 ? 2 : 1);
      std::vector<Lattice> all = lattices;
      all.insert(all.end(), subs.begin(), subs.end());
      for (const auto& l : all) {
        const auto pieces = subdivide_to_basic(standard_octant(n), l);
        for (const auto& c : pieces) CHECK(multiplicity(c, l) == 1);
        for (int sample = 0; sample < 50; ++sample) {
          std::vector<double> x(n);
          for (auto& t : x) t = u(rng);
          int count = 0;
          for (const auto& c : pieces) count += inside(c, x);
          CHECK(count == 1);
        }
      }
    }
  CHECK(multiplicity(standard_octant(3), standard_lattice(3)) == 1);
  CHECK(multiplicity(standard_octant(2), make_lattice({{1, 1}, {2, 0}}, 2)) == 2);
}

TEST_CASE("T_2 on M_2 is the four-term formula") {
  for (std::int64_t N : {5, 7, 9}) {
    const auto g = AbelianGroup::cyclic(N);
    const auto index = enumerate_symbols(g, 2, Flavor::M);
    const auto h = hecke_matrix(index, 2, 1);
    for (std::uint32_t c = 0; c < index.size(); ++c) {
      const Code a1 = index.at(c)[0], a2 = index.at(c)[1];
      const auto want = combination(index, {{{g.scale(a1, 2), a2}, 1},
                                            {{g.sub(a1, a2), g.scale(a2, 2)}, 1},
                                            {{g.scale(a1, 2), g.sub(a2, a1)}, 1},
                                            {{a1, g.scale(a2, 2)}, 1}});
      CHECK(image_of(h, c) == want);
    }
  }
}

TEST_CASE("T*_2 on M*_2 matches its display") {
  for (std::int64_t N : {5, 7}) {
    const auto g = AbelianGroup::cyclic(N);
    const auto index = enumerate_symbols(g, 2, Flavor::Mstar);
    const auto h = hecke_matrix(index, 2, 1);
    for (std::uint32_t c = 0; c < index.size(); ++c) {
      const Code a1 = index.at(c)[0], a2 = index.at(c)[1], s = g.add(a1, a2);
      const auto want = combination(index, {{{g.scale(a1, 2), a2}, 1},
                                            {{g.scale(a1, 2), s}, 1},
                                            {{s, g.scale(a2, 2)}, 1},
                                            {{a1, g.scale(a2, 2)}, 1}});
      CHECK(image_of(h, c) == want);
    }
  }
}

TEST_CASE("T*_{2,1} on M*_3: thirteen terms, equal in the quotient to the display") {
  bool typo_fails_somewhere = false;
  for (std::int64_t N : {7, 11, 13}) {
  const auto g = AbelianGroup::cyclic(N);
  const auto system = build_relations(g, 3, Flavor::Mstar, full_kset(3));
  const auto& index = system.index();
  const auto h = hecke_matrix(index, 2, 1);
  std::vector<ModpEchelon> echelons;
  EliminationOptions keep;
  keep.keep_pivots = true;
  for (auto p : kPrimes) echelons.emplace_back(system.matrix(), p, keep);
  auto in_span = [&](const SymbolVector& v) {
    const auto row = v.to_row();
    return std::all_of(echelons.begin(), echelons.end(), [&](const ModpEchelon& e) { return e.in_rowspan(row); });
  };
  auto display = [&](Code a1, Code a2, Code a3, bool typo) {
    auto d = [&](Code x) { return g.scale(x, 2); };
    auto s = [&](Code x, Code y) { return g.add(x, y); };
    std::vector<std::pair<std::vector<Code>, std::int64_t>> t = {
        {{d(a1), a2, a3}, 1},
        {{a1, d(a2), a3}, 1},
        {{a1, a2, d(a3)}, 1},
        {{d(a1), s(a1, a2), a3}, 1},
        {{s(a1, a2), d(a2), a3}, 1},
        {{a1, d(a2), s(a2, a3)}, 1},
        {{a1, s(a2, a3), d(a3)}, 1},
        {{d(a1), a2, s(a1, a3)}, 1},
        {{s(a1, a3), a2, typo ? a3 : d(a3)}, 1},
        {{d(a1), s(a1, a2), s(a1, a3)}, 1},
        {{s(a1, a2), d(a2), s(a2, a3)}, 1},
        {{s(a1, a3), s(a2, a3), d(a3)}, 1},
        {{s(a1, a2), s(a2, a3), s(a1, a3)}, 1},
    };
    return t;
  };
  for (std::uint32_t c = 0; c < index.size(); ++c) {
    const auto t = index.at(c).view();
    const auto terms = hecke_terms(g, h, t);
    CHECK(terms.size() == 13);
    SymbolVector diff = image_of(h, c);
    diff -= combination(index, display(t[0], t[1], t[2], false));
    CHECK(in_span(diff));
    auto typo_terms = display(t[0], t[1], t[2], true);
    bool spans = true;
    for (const auto& [tt, x] : typo_terms) spans = spans && g.spans(tt);
    if (!spans) continue;
    SymbolVector bad = image_of(h, c);
    bad -= combination(index, typo_terms);
    if (!in_span(bad)) typo_fails_somewhere = true;
  }
  }
  CHECK(typo_fails_somewhere);
}

TEST_CASE("Hecke operators preserve relations and commute") {
  struct Case {
    std::int64_t N;
    int n;
    Flavor f;
  };
  for (const auto& [N, n, f] : std::vector<Case>{{5, 2, Flavor::M},
                                                 {7, 2, Flavor::M},
                                                 {5, 3, Flavor::M},
                                                 {11, 2, Flavor::Mminus},
                                                 {7, 3, Flavor::Mminus},
                                                 {7, 2, Flavor::Mstar}}) {
    const auto s = build_relations(AbelianGroup::cyclic(N), n, f, full_kset(n));
    const std::uint32_t p = 1000003;
    const auto t2 = induced_on_quotient(hecke_matrix(s.index(), 2, 1), s.matrix(), p);
    const auto t3 = induced_on_quotient(hecke_matrix(s.index(), 3, 1), s.matrix(), p);
    CHECK(multiply_mod_p(t2, t3, p) == multiply_mod_p(t3, t2, p));
    if (n == 3) {
      const auto t22 = induced_on_quotient(hecke_matrix(s.index(), 2, 2), s.matrix(), p);
      CHECK(multiply_mod_p(t2, t22, p) == multiply_mod_p(t22, t2, p));
    }
  }
}

TEST_CASE("Hecke argument checks") {
  const auto b = enumerate_symbols(AbelianGroup::cyclic(5), 2, Flavor::B);
  CHECK_THROWS_AS(hecke_matrix(b, 2, 1), Error);
  const auto m = enumerate_symbols(AbelianGroup::cyclic(6), 2, Flavor::M);
  CHECK_THROWS_AS(hecke_matrix(m, 2, 1), Error);
  const auto m5 = enumerate_symbols(AbelianGroup::cyclic(5), 2, Flavor::M);
  CHECK_THROWS_AS(hecke_matrix(m5, 2, 2), Error);
  CHECK_NOTHROW(hecke_matrix(m5, 2, 2, HeckeOptions{true}));
}
