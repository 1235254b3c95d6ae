#include "birsym/modsym.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "birsym/relations.hpp"

namespace birsym {

namespace {

std::int64_t mod(std::int64_t x, std::int64_t N) {
  x %= N;
  return x < 0 ? x + N : x;
}

bool admissible(std::int64_t N, std::int64_t c, std::int64_t d) {
  return std::gcd(std::gcd(c, d), N) == 1;
}

}  // namespace

ManinCanonical canonicalize_manin(std::int64_t N, ManinSymbol s, bool minus) {
  if (N < 1) throw Error("Manin symbols need N >= 1");
  s = {mod(s.c, N), mod(s.d, N)};
  if (!admissible(N, s.c, s.d)) throw Error("Manin symbol violates gcd(c, d, N) = 1");
  // orbit under (c,d) -> -(d,-c) and, for the minus space, (c,d) -> (d,c)
  std::vector<std::pair<ManinSymbol, int>> orbit{{s, 1}};
  bool self_negating = false;
  for (std::size_t i = 0; i < orbit.size(); ++i) {
    const auto [t, sign] = orbit[i];
    std::vector<std::pair<ManinSymbol, int>> next{{{t.d, mod(-t.c, N)}, -sign}};
    if (minus) next.push_back({{t.d, t.c}, sign});
    for (const auto& [u, us] : next) {
      auto it = std::find_if(orbit.begin(), orbit.end(), [&](const auto& e) { return e.first == u; });
      if (it == orbit.end())
        orbit.push_back({u, us});
      else if (it->second != us)
        self_negating = true;
    }
  }
  const auto best = std::min_element(orbit.begin(), orbit.end(),
                                     [](const auto& x, const auto& y) { return x.first < y.first; });
  return {best->first, self_negating ? 0 : best->second};
}

ManinSystem::ManinSystem(std::int64_t N, bool minus, ManinR2 r2) : N_(N), minus_(minus) {
  if (N < 1) throw Error("Manin symbols need N >= 1");
  for (std::int64_t c = 0; c < N; ++c)
    for (std::int64_t d = 0; d < N; ++d) {
      if (!admissible(N, c, d)) continue;
      const auto canon = canonicalize_manin(N, {c, d}, minus);
      if (canon.sign == 0 || !(canon.symbol == ManinSymbol{c, d})) continue;
      lookup_.emplace(c * N + d, static_cast<std::uint32_t>(symbols_.size()));
      symbols_.push_back({c, d});
    }
  matrix_ = SparseMatrix(symbols_.size());
  std::set<std::vector<std::pair<std::uint32_t, std::int64_t>>> seen;
  for (std::int64_t c = 0; c < N; ++c)
    for (std::int64_t d = 0; d < N; ++d) {
      if (!admissible(N, c, d)) continue;
      SymbolVector v;
      auto put = [&](std::int64_t x, std::int64_t y, std::int64_t coef) {
        const auto t = locate(x, y);
        if (t.coefficient != 0) v.add(t.column, coef * t.coefficient);
      };
      if (!minus) {
        put(c, d, 1);
        put(d, -c - d, 1);
        put(-c - d, c, 1);
      } else if (r2 == ManinR2::Standard) {
        put(c, d, 1);
        put(c, d - c, -1);
        put(c - d, d, -1);
      } else {
        put(c, d, 1);
        put(c + d, d, -1);
        put(c, c + d, -1);
      }
      SparseRow row = v.to_row();
      if (row.empty()) continue;
      if (row.front().value < 0)
        for (auto& e : row) e.value = -e.value;
      std::vector<std::pair<std::uint32_t, std::int64_t>> key;
      for (const auto& e : row) key.emplace_back(e.col, e.value);
      if (seen.insert(std::move(key)).second) matrix_.add_row(std::move(row));
    }
}

ManinSystem::Term ManinSystem::locate(std::int64_t c, std::int64_t d) const {
  const auto canon = canonicalize_manin(N_, {c, d}, minus_);
  if (canon.sign == 0) return {};
  const auto it = lookup_.find(canon.symbol.c * N_ + canon.symbol.d);
  if (it == lookup_.end()) throw Error("Manin symbol missing from the basis");
  return {it->second, canon.sign};
}

ManinSystem build_manin_system(std::int64_t N) { return ManinSystem(N, false); }

ManinSystem build_manin_minus_system(std::int64_t N, ManinR2 r2) { return ManinSystem(N, true, r2); }

CuspCounts cusp_counts(std::int64_t N) {
  if (N < 1) throw Error("cusp counts need N >= 1");
  static constexpr std::int64_t small[] = {1, 2, 2, 3};
  if (N <= 4) return {small[N - 1], small[N - 1]};
  std::int64_t twice = 0;
  for (std::int64_t d = 1; d <= N; ++d)
    if (N % d == 0) twice += euler_phi(d) * euler_phi(N / d);
  const std::int64_t c2 = N % 2 == 0 ? euler_phi(N) + euler_phi(N / 2) : euler_phi(N);
  return {twice / 2, c2};
}

bool ModsymReport::minus_formula_holds() const {
  if (!genus) return false;
  const std::int64_t diff = cusps.C - cusps.C2;
  return diff % 2 == 0 && static_cast<std::int64_t>(dim_minus) == *genus + diff / 2;
}

std::string ModsymReport::csv_header() { return "N,dim,dim_minus,C,C2,g"; }

std::string ModsymReport::csv() const {
  std::ostringstream out;
  out << N << ',' << dim << ',' << dim_minus << ',' << cusps.C << ',' << cusps.C2 << ',';
  if (genus) out << *genus;
  return out.str();
}

ModsymReport modsym_dimensions(std::int64_t N, const std::vector<std::uint32_t>& primes) {
  ModsymReport report;
  report.N = N;
  const auto full = build_manin_system(N);
  const auto minus = build_manin_minus_system(N);
  report.dim = full.symbols() - rank_q(full.matrix(), primes).rank;
  report.dim_minus = minus.symbols() - rank_q(minus.matrix(), primes).rank;
  report.cusps = cusp_counts(N);
  const std::int64_t twice_g = static_cast<std::int64_t>(report.dim) - report.cusps.C + 1;
  if (twice_g >= 0 && twice_g % 2 == 0) report.genus = twice_g / 2;
  return report;
}

ManinComparison compare_with_symbol_group(std::int64_t N, const std::vector<std::uint32_t>& primes) {
  ManinComparison out;
  out.N = N;
  const auto group = AbelianGroup::cyclic(N);
  const auto symbols = build_relations(group, 2, Flavor::Mminus, full_kset(2));
  const auto manin = build_manin_minus_system(N);
  out.dim_symbol_group = symbols.symbols() - rank_q(symbols.matrix(), primes).rank;
  out.dim_manin_minus = manin.symbols() - rank_q(manin.matrix(), primes).rank;
  // <a1, a2>^- -> (a1, a2)^-
  std::vector<ManinSystem::Term> image(symbols.symbols());
  for (std::size_t c = 0; c < symbols.symbols(); ++c) {
    const auto key = symbols.index().at(c);
    image[c] = manin.locate(key[0], key[1]);
  }
  for (std::size_t r = 0; r < symbols.relations(); ++r) {
    SymbolVector v;
    for (const auto& e : symbols.matrix().row(r))
      if (image[e.col].coefficient != 0) v.add(image[e.col].column, e.value * image[e.col].coefficient);
    ++out.rows_checked;
    if (!in_rowspan_q(manin.matrix(), v.to_row(), primes)) ++out.rows_outside;
  }
  return out;
}

}  // namespace birsym
