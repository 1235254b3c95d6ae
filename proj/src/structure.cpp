#include "birsym/structure.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <sstream>

namespace birsym {

namespace {

// Symbol index, relations and mod-p echelon of one group, built on demand.
struct Presentation {
  RelationSystem system;
  std::map<std::uint32_t, ModpEchelon> echelons;

  const ModpEchelon& echelon(std::uint32_t p) {
    auto it = echelons.find(p);
    if (it == echelons.end()) {
      EliminationOptions o;
      o.keep_pivots = true;
      it = echelons.emplace(p, ModpEchelon(system.matrix(), p, o)).first;
    }
    return it->second;
  }
};

class PresentationCache {
 public:
  Presentation& get(std::int64_t order, int n, Flavor flavor) {
    auto key = std::make_tuple(order, n, flavor);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      auto system = build_relations(AbelianGroup::cyclic(order), n, flavor, full_kset(n));
      it = cache_.emplace(key, Presentation{std::move(system), {}}).first;
    }
    return it->second;
  }

 private:
  std::map<std::tuple<std::int64_t, int, Flavor>, Presentation> cache_;
};

// Quotient coordinates of every symbol of a presentation, as dense rows.
std::vector<std::vector<std::uint32_t>> symbol_coordinates(Presentation& pres, std::uint32_t p) {
  const auto& ech = pres.echelon(p);
  std::vector<std::vector<std::uint32_t>> out;
  out.reserve(pres.system.symbols());
  for (std::uint32_t c = 0; c < pres.system.symbols(); ++c) {
    Entry e{c, 1};
    out.push_back(ech.project(std::span<const Entry>(&e, 1)));
  }
  return out;
}

std::vector<std::int64_t> proper_divisors(std::int64_t N, bool include_one) {
  std::vector<std::int64_t> out;
  for (std::int64_t d = include_one ? 1 : 2; d < N; ++d)
    if (N % d == 0) out.push_back(d);
  return out;
}

void require_cyclic_order(std::int64_t N) {
  if (N < 1) throw Error("structure maps need a cyclic group Z/N with N >= 1");
}

}  // namespace

std::size_t LinearMap::target_size() const {
  std::size_t s = 1;
  for (const auto& t : target) s *= t.size();
  return s;
}

SymbolVector LinearMap::apply(std::span<const Entry> v) const {
  SymbolVector out;
  for (const auto& e : v)
    for (const auto& t : images.row(e.col)) out.add(t.col, e.value * t.value);
  return out;
}

void SubquotientDatum::validate() const {
  if (N < 1 || d < 1 || N % d != 0) throw Error("subgroup datum: d must divide N");
}

LinearMap mu_map(const AbelianGroup& group, int n) {
  LinearMap map;
  map.source = enumerate_symbols(group, n, Flavor::B);
  map.target.push_back(enumerate_symbols(group, n, Flavor::M));
  map.images = SparseMatrix(map.target[0].size());
  for (std::size_t c = 0; c < map.source.size(); ++c) {
    const auto tuple = map.source.at(c).view();
    const auto zeros = std::count(tuple.begin(), tuple.end(), Code{0});
    SparseRow row;
    if (zeros <= 1) row.push_back({map.target[0].locate(tuple).column, zeros == 0 ? 1 : 2});
    map.images.add_row(std::move(row));
  }
  return map;
}

MuReport verify_mu(const AbelianGroup& group, int n, const std::vector<std::uint32_t>& primes) {
  if (primes.empty()) throw Error("verify_mu: empty prime list");
  MuReport report;
  const auto map = mu_map(group, n);
  auto b = build_relations(map.source, full_kset(n));
  auto m = build_relations(map.target[0], full_kset(n));
  report.b_symbols = b.symbols();
  report.m_symbols = m.symbols();
  report.dim_b = b.symbols() - rank_q(b.matrix(), primes).rank;
  report.dim_m = m.symbols() - rank_q(m.matrix(), primes).rank;
  EliminationOptions o;
  o.keep_pivots = true;
  std::vector<ModpEchelon> echelons;
  for (auto p : primes) echelons.emplace_back(m.matrix(), p, o);
  const IntegerQuotient quotient(m.matrix());
  for (std::size_t r = 0; r < b.relations(); ++r) {
    const auto image = map.apply(b.matrix().row(r)).to_row();
    ++report.rows_checked;
    bool in_q = std::all_of(echelons.begin(), echelons.end(),
                            [&](const ModpEchelon& e) { return e.in_rowspan(image); });
    if (!in_q) ++report.rows_outside_q;
    if (!quotient.contains(image)) ++report.rows_outside_z;
  }
  // the cokernel is 2-torsion iff its free rank is 0 and every divisor is a power of 2
  const IntegerQuotient cokernel(m.matrix().stacked(map.images));
  report.surjective_mod_2 = cokernel.free_rank() == 0;
  for (const auto& t : cokernel.torsion()) {
    mpz_class x = t;
    while (mpz_even_p(x.get_mpz_t())) x /= 2;
    if (x != 1) report.surjective_mod_2 = false;
  }
  return report;
}

std::vector<mpz_class> mu_cokernel(const AbelianGroup& group, int n) {
  const auto map = mu_map(group, n);
  auto m = build_relations(map.target[0], full_kset(n));
  return snf(m.matrix().stacked(map.images));
}

std::vector<DeltaTerm> delta_terms(const SubquotientDatum& datum, int n_first, std::span<const Code> tuple) {
  datum.validate();
  const int n = static_cast<int>(tuple.size());
  const int n_second = n - n_first;
  if (n_first < 1 || n_second < 1) throw Error("Delta: both parts must be nonempty");
  const std::int64_t d = datum.d, q = datum.quotient_order();
  if (q == 1) throw Error("Delta: the quotient group G'' must be nontrivial");
  std::vector<DeltaTerm> out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != n_second) continue;
    DeltaTerm term;
    std::int64_t g = q;
    bool ok = true;
    for (int i = 0; i < n; ++i) {
      const std::int64_t a = tuple[i];
      if (mask & (1u << i)) {
        if (a % d != 0) {
          ok = false;
          break;
        }
        term.second.push_back(static_cast<Code>(a / d));
        g = std::gcd(g, a / d);
      } else {
        term.first.push_back(static_cast<Code>(a % d));
      }
    }
    if (ok && g == 1) out.push_back(std::move(term));
  }
  return out;
}

LinearMap delta_map(const SubquotientDatum& datum, int n_first, int n_second, bool minus_variant) {
  datum.validate();
  const int n = n_first + n_second;
  LinearMap map;
  map.source = enumerate_symbols(AbelianGroup::cyclic(datum.N), n, minus_variant ? Flavor::Mminus : Flavor::M);
  map.target.push_back(enumerate_symbols(AbelianGroup::cyclic(datum.d), n_first,
                                         minus_variant ? Flavor::Mminus : Flavor::M));
  map.target.push_back(enumerate_symbols(AbelianGroup::cyclic(datum.quotient_order()), n_second, Flavor::Mminus));
  const std::size_t second = map.target[1].size();
  map.images = SparseMatrix(map.target_size());
  for (std::size_t c = 0; c < map.source.size(); ++c) {
    SparseRow row;
    for (const auto& term : delta_terms(datum, n_first, map.source.at(c).view())) {
      const auto l1 = map.target[0].locate(term.first);
      const auto l2 = map.target[1].locate(term.second);
      if (l1.coefficient == 0 || l2.coefficient == 0) continue;
      row.push_back({static_cast<std::uint32_t>(l1.column * second + l2.column),
                     static_cast<std::int64_t>(l1.coefficient) * l2.coefficient});
    }
    map.images.add_row(std::move(row));
  }
  return map;
}

LinearMap nabla_map(const SubquotientDatum& datum, int n_first, int n_second, bool minus_variant) {
  datum.validate();
  if (n_first < 1 || n_second < 1) throw Error("nabla: both parts must be nonempty");
  const Flavor f = minus_variant ? Flavor::Mminus : Flavor::M;
  const std::int64_t d = datum.d, q = datum.quotient_order();
  LinearMap map;
  // source columns are generator pairs; the source index records the first factor
  map.target.push_back(enumerate_symbols(AbelianGroup::cyclic(datum.N), n_first + n_second, f));
  const auto first = enumerate_symbols(AbelianGroup::cyclic(d), n_first, f);
  const auto second = enumerate_symbols(AbelianGroup::cyclic(q), n_second, f);
  map.source = first;
  map.images = SparseMatrix(map.target[0].size());
  std::vector<Code> tuple(static_cast<std::size_t>(n_first + n_second));
  for (std::size_t i1 = 0; i1 < first.size(); ++i1) {
    for (std::size_t i2 = 0; i2 < second.size(); ++i2) {
      const auto a1 = first.at(i1).view();
      const auto a2 = second.at(i2).view();
      for (int j = 0; j < n_second; ++j) tuple[n_first + j] = static_cast<Code>(a2[j] * d);
      SymbolVector image;
      // all lifts a1_i + d*t, t in [0, q)
      std::vector<std::int64_t> t(static_cast<std::size_t>(n_first), 0);
      while (true) {
        for (int j = 0; j < n_first; ++j) tuple[j] = static_cast<Code>(a1[j] + d * t[j]);
        if (!map.target[0].group().spans(tuple)) throw Error("nabla: lifted symbol does not span A");
        const auto loc = map.target[0].locate(tuple);
        if (loc.coefficient != 0) image.add(loc.column, loc.coefficient);
        int j = 0;
        while (j < n_first && ++t[j] == q) t[j++] = 0;
        if (j == n_first) break;
      }
      map.images.add_row(image.to_row());
    }
  }
  return map;
}

bool verify_delta(const LinearMap& delta, std::uint32_t p) {
  if (delta.target.size() != 2) throw Error("verify_delta: expected a tensor-product target");
  const int n = delta.source.arity();
  auto src = build_relations(delta.source, full_kset(n));
  Presentation t1{build_relations(delta.target[0], full_kset(delta.target[0].arity())), {}};
  Presentation t2{build_relations(delta.target[1], full_kset(delta.target[1].arity())), {}};
  const auto c1 = symbol_coordinates(t1, p);
  const auto c2 = symbol_coordinates(t2, p);
  const std::size_t q1 = t1.echelon(p).free_cols().size(), q2 = t2.echelon(p).free_cols().size();
  const std::size_t second = delta.target[1].size();
  for (std::size_t r = 0; r < src.relations(); ++r) {
    std::vector<std::uint64_t> acc(q1 * q2, 0);
    for (const auto& t : delta.apply(src.matrix().row(r)).to_row()) {
      const auto& u = c1[t.col / second];
      const auto& v = c2[t.col % second];
      const std::uint32_t coef = reduce_mod(t.value, p);
      for (std::size_t i = 0; i < q1; ++i) {
        if (!u[i]) continue;
        const std::uint64_t cu = static_cast<std::uint64_t>(coef) * u[i] % p;
        for (std::size_t j = 0; j < q2; ++j) acc[i * q2 + j] = (acc[i * q2 + j] + cu * v[j]) % p;
      }
    }
    if (std::any_of(acc.begin(), acc.end(), [](std::uint64_t x) { return x != 0; })) return false;
  }
  return true;
}

std::string DimensionReport::csv() const {
  std::ostringstream out;
  out << N << ',' << n << ',' << variant << ',' << dim << ',';
  for (std::size_t i = 0; i < primes.size(); ++i) out << (i ? ";" : "") << primes[i];
  return out.str();
}

DimensionReport primitive_dim(std::int64_t N, int n, Flavor variant, const std::vector<std::uint32_t>& primes) {
  require_cyclic_order(N);
  if (variant != Flavor::M && variant != Flavor::Mminus) throw Error("primitive_dim: variant must be M or Mminus");
  if (primes.empty()) throw Error("primitive_dim: empty prime list");
  const bool minus = variant == Flavor::Mminus;
  DimensionReport report{N, n, to_string(variant), primes, {}, 0};
  PresentationCache cache;
  Presentation& source = cache.get(N, n, variant);
  const auto divisors = proper_divisors(N, !minus);
  for (auto p : primes) {
    const auto& ech = source.echelon(p);
    const auto& basis = ech.free_cols();
    // row per basis symbol: concatenated coordinates of all Delta images
    std::vector<SparseRow> rows(basis.size());
    std::uint32_t offset = 0;
    for (auto d : divisors) {
      const SubquotientDatum datum{N, d};
      for (int n1 = 1; n1 < n; ++n1) {
        const int n2 = n - n1;
        Presentation& f1 = cache.get(d, n1, variant);
        Presentation& f2 = cache.get(N / d, n2, Flavor::Mminus);
        const auto c1 = symbol_coordinates(f1, p);
        const auto c2 = symbol_coordinates(f2, p);
        const std::size_t q1 = f1.echelon(p).free_cols().size(), q2 = f2.echelon(p).free_cols().size();
        if (q1 * q2 == 0) continue;
        for (std::size_t b = 0; b < basis.size(); ++b) {
          std::vector<std::uint64_t> acc(q1 * q2, 0);
          for (const auto& term : delta_terms(datum, n1, source.system.index().at(basis[b]).view())) {
            const auto l1 = f1.system.index().locate(term.first);
            const auto l2 = f2.system.index().locate(term.second);
            if (l1.coefficient == 0 || l2.coefficient == 0) continue;
            const std::uint32_t coef = reduce_mod(l1.coefficient * l2.coefficient, p);
            const auto& u = c1[l1.column];
            const auto& v = c2[l2.column];
            for (std::size_t i = 0; i < q1; ++i) {
              if (!u[i]) continue;
              const std::uint64_t cu = static_cast<std::uint64_t>(coef) * u[i] % p;
              for (std::size_t j = 0; j < q2; ++j) acc[i * q2 + j] = (acc[i * q2 + j] + cu * v[j]) % p;
            }
          }
          for (std::size_t k = 0; k < acc.size(); ++k)
            if (acc[k]) rows[b].push_back({static_cast<std::uint32_t>(offset + k), static_cast<std::int64_t>(acc[k])});
        }
        offset += static_cast<std::uint32_t>(q1 * q2);
      }
    }
    SparseMatrix m(offset);
    for (auto& r : rows) m.add_row(std::move(r));
    const std::size_t rank = offset ? rank_mod_p(m, p) : 0;
    report.per_prime.push_back(basis.size() - rank);
  }
  report.dim = *std::min_element(report.per_prime.begin(), report.per_prime.end());
  return report;
}

DimensionReport coprimitive_dim(std::int64_t N, int n, const std::vector<std::uint32_t>& primes) {
  require_cyclic_order(N);
  if (primes.empty()) throw Error("coprimitive_dim: empty prime list");
  DimensionReport report{N, n, "Mminus-coprim", primes, {}, 0};
  auto target = build_relations(AbelianGroup::cyclic(N), n, Flavor::Mminus, full_kset(n));
  SparseMatrix stacked = target.matrix();
  for (auto d : proper_divisors(N, false))
    for (int n1 = 1; n1 < n; ++n1)
      stacked = stacked.stacked(nabla_map({N, d}, n1, n - n1, true).images);
  for (auto p : primes) report.per_prime.push_back(target.symbols() - rank_mod_p(stacked, p));
  report.dim = *std::min_element(report.per_prime.begin(), report.per_prime.end());
  return report;
}

}  // namespace birsym
