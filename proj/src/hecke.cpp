#include "birsym/hecke.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace birsym {

namespace {

using i64 = std::int64_t;
using i128 = __int128;

i64 checked(i128 v) {
  if (v > (i128{1} << 62) || v < -(i128{1} << 62)) throw Error("lattice arithmetic overflow");
  return static_cast<i64>(v);
}

i64 floor_mod(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

IntMatrix transpose(const IntMatrix& a) {
  if (a.empty()) return {};
  IntMatrix t(a[0].size(), IntVector(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
  return t;
}

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
  const std::size_t n = a.size(), k = b.size(), m = k ? b[0].size() : 0;
  IntMatrix c(n, IntVector(m, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t t = 0; t < k; ++t)
      for (std::size_t j = 0; j < m; ++j) c[i][j] = checked(c[i][j] + i128{a[i][t]} * b[t][j]);
  return c;
}

IntVector apply_matrix(const IntMatrix& a, const IntVector& x) {
  IntVector y(a.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) y[i] = checked(y[i] + i128{a[i][j]} * x[j]);
  return y;
}

// Fraction-free (Bareiss) determinant.
i64 determinant(IntMatrix a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  i64 sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t r = k + 1;
      while (r < n && a[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(a[k], a[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        a[i][j] = checked((i128{a[i][j]} * a[k][k] - i128{a[i][k]} * a[k][j]) / prev);
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

IntMatrix adjugate(const IntMatrix& a) {
  const std::size_t n = a.size();
  IntMatrix adj(n, IntVector(n, 0));
  if (n == 1) {
    adj[0][0] = 1;
    return adj;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      IntMatrix minor;
      for (std::size_t r = 0; r < n; ++r) {
        if (r == i) continue;
        IntVector row;
        for (std::size_t c = 0; c < n; ++c)
          if (c != j) row.push_back(a[r][c]);
        minor.push_back(std::move(row));
      }
      const i64 cof = determinant(minor);
      adj[j][i] = ((i + j) % 2 ? -cof : cof);
    }
  return adj;
}

i64 content(const IntVector& v) {
  i64 g = 0;
  for (i64 x : v) g = std::gcd(g, x);
  return g;
}

IntVector primitive(IntVector v) {
  const i64 g = content(v);
  if (g == 0) throw Error("degenerate cone: zero generator");
  for (auto& x : v) x /= g;
  return v;
}

IntMatrix hermite_rows(IntMatrix a, std::size_t n) {
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < a.size(); ++col) {
    while (true) {
      std::size_t best = a.size();
      for (std::size_t i = row; i < a.size(); ++i)
        if (a[i][col] != 0 && (best == a.size() || std::abs(a[i][col]) < std::abs(a[best][col]))) best = i;
      if (best == a.size()) break;
      std::swap(a[row], a[best]);
      bool done = true;
      for (std::size_t i = row + 1; i < a.size(); ++i) {
        if (a[i][col] == 0) continue;
        const i64 q = a[i][col] / a[row][col];
        for (std::size_t j = col; j < n; ++j) a[i][j] = checked(a[i][j] - i128{q} * a[row][j]);
        if (a[i][col] != 0) done = false;
      }
      if (done) break;
    }
    if (row >= a.size() || a[row][col] == 0) continue;
    if (a[row][col] < 0)
      for (auto& x : a[row]) x = -x;
    for (std::size_t i = 0; i < row; ++i) {
      const i64 q = a[i][col] >= 0 ? a[i][col] / a[row][col] : -((-a[i][col] + a[row][col] - 1) / a[row][col]);
      if (q != 0)
        for (std::size_t j = col; j < n; ++j) a[i][j] = checked(a[i][j] - i128{q} * a[row][j]);
    }
    ++row;
  }
  a.resize(row);
  return a;
}

void check_prime(int ell) {
  if (ell < 2 || !is_prime(static_cast<std::uint64_t>(ell))) throw Error("l must be prime");
}

// Reduced row echelon bases of all k-dimensional subspaces of F_ell^n.
std::vector<IntMatrix> subspaces(int n, int ell, int k) {
  std::vector<IntMatrix> out;
  std::vector<int> pivots(static_cast<std::size_t>(k));
  std::iota(pivots.begin(), pivots.end(), 0);
  while (true) {
    std::vector<std::pair<int, int>> free;
    for (int t = 0; t < k; ++t)
      for (int c = pivots[t] + 1; c < n; ++c)
        if (std::find(pivots.begin(), pivots.end(), c) == pivots.end()) free.emplace_back(t, c);
    std::vector<int> digits(free.size(), 0);
    while (true) {
      IntMatrix basis(static_cast<std::size_t>(k), IntVector(static_cast<std::size_t>(n), 0));
      for (int t = 0; t < k; ++t) basis[t][pivots[t]] = 1;
      for (std::size_t f = 0; f < free.size(); ++f) basis[free[f].first][free[f].second] = digits[f];
      out.push_back(std::move(basis));
      std::size_t f = 0;
      while (f < digits.size() && ++digits[f] == ell) digits[f++] = 0;
      if (f == digits.size()) break;
    }
    int t = k - 1;
    while (t >= 0 && pivots[t] == n - k + t) --t;
    if (t < 0) break;
    ++pivots[t];
    for (int u = t + 1; u < k; ++u) pivots[u] = pivots[u - 1] + 1;
  }
  return out;
}

// Lattice coordinates of the primitive lattice vector on the ray through the
// ambient vector y (any positive scaling).
IntVector ray_in_lattice(const Lattice& lattice, const IntVector& y) {
  const IntMatrix bt = transpose(lattice.basis);
  const i64 det = determinant(bt);
  IntVector lam = apply_matrix(adjugate(bt), y);
  if (det < 0)
    for (auto& x : lam) x = -x;
  return primitive(std::move(lam));
}

IntMatrix cone_in_lattice(const SimplicialCone& cone, const Lattice& lattice) {
  const std::size_t n = lattice.basis.size();
  if (cone.generators.size() != n) throw Error("cone and lattice have different dimensions");
  IntMatrix f;
  for (const auto& g : cone.generators) {
    if (g.size() != n) throw Error("cone generator has wrong length");
    f.push_back(ray_in_lattice(lattice, g));
  }
  if (determinant(f) == 0) throw Error("degenerate cone: generators are dependent");
  return f;
}

SimplicialCone cone_to_ambient(const IntMatrix& f, const Lattice& lattice) {
  const IntMatrix bt = transpose(lattice.basis);
  SimplicialCone cone;
  cone.denominator = lattice.denominator;
  for (const auto& row : f) cone.generators.push_back(apply_matrix(bt, row));
  return cone;
}

// Stellar subdivision at the lattice point of smallest coordinate sum in the
// half-open parallelepiped (lexicographic tie-break), until every cone is basic.
void subdivide(const IntMatrix& f, std::vector<IntMatrix>& out) {
  const std::size_t n = f.size();
  const IntMatrix ft = transpose(f);
  const i64 det = determinant(ft);
  const i64 d = std::abs(det);
  if (d == 1) {
    out.push_back(f);
    return;
  }
  IntMatrix adj = adjugate(ft);
  if (det < 0)
    for (auto& row : adj)
      for (auto& x : row) x = -x;
  // The points form the group Z^n / F^T Z^n, generated by the columns of adj mod d.
  std::vector<IntVector> gens(n, IntVector(n));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) gens[k][i] = floor_mod(adj[i][k], d);
  std::set<IntVector> seen{IntVector(n, 0)};
  std::vector<IntVector> frontier{IntVector(n, 0)};
  while (!frontier.empty()) {
    IntVector u = std::move(frontier.back());
    frontier.pop_back();
    for (const auto& g : gens) {
      IntVector w(n);
      for (std::size_t i = 0; i < n; ++i) w[i] = (u[i] + g[i]) % d;
      if (seen.insert(w).second) frontier.push_back(std::move(w));
    }
  }
  if (static_cast<i64>(seen.size()) != d) throw Error("subdivision: parallelepiped point count mismatch");
  const IntVector* best = nullptr;
  i64 best_sum = 0;
  for (const auto& u : seen) {
    const i64 s = std::accumulate(u.begin(), u.end(), i64{0});
    if (s == 0) continue;
    if (!best || s < best_sum || (s == best_sum && u < *best)) {
      best = &u;
      best_sum = s;
    }
  }
  IntVector w = apply_matrix(ft, *best);
  for (auto& x : w) x /= d;
  for (std::size_t j = 0; j < n; ++j) {
    if ((*best)[j] == 0) continue;
    IntMatrix g = f;
    g[j] = w;
    subdivide(g, out);
  }
}

Code combine(const AbelianGroup& group, const IntVector& coefficients, std::span<const Code> a) {
  Code out = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (coefficients[i] != 0) out = group.add(out, group.scale(a[i], coefficients[i]));
  return out;
}

// Map a -> T a for a basic cone in lattice coordinates, vector version.
IntMatrix vector_map(const IntMatrix& f, const Lattice& lattice) {
  const std::size_t n = f.size();
  const IntMatrix bt = transpose(lattice.basis);
  const i64 det_b = determinant(bt);
  const IntMatrix adj_b = adjugate(bt);
  // E: lattice coordinates of the standard basis vectors (columns)
  IntMatrix e(n, IntVector(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const i128 num = i128{adj_b[i][j]} * lattice.denominator;
      if (num % det_b != 0) throw Error("vector symbol: lattice does not contain Z^n");
      e[i][j] = checked(num / det_b);
    }
  const IntMatrix ft = transpose(f);
  const i64 det_f = determinant(ft);
  if (std::abs(det_f) != 1) throw Error("symbol_of_cone: cone is not basic for the lattice");
  IntMatrix inv = adjugate(ft);
  if (det_f < 0)
    for (auto& row : inv)
      for (auto& x : row) x = -x;
  return multiply(inv, e);
}

// Map a -> T a for a basic cone in lattice coordinates, co-vector version.
IntMatrix covector_map(const IntMatrix& f, const Lattice& lattice) {
  if (std::abs(determinant(f)) != 1) throw Error("symbol_of_cone: cone is not basic for the lattice");
  const IntMatrix bt = transpose(lattice.basis);
  IntMatrix t;
  for (const auto& row : f) {
    IntVector amb = apply_matrix(bt, row);
    for (auto& x : amb) {
      if (x % lattice.denominator != 0) throw Error("co-vector symbol: generator is not integral");
      x /= lattice.denominator;
    }
    t.push_back(std::move(amb));
  }
  return t;
}

std::vector<Code> apply_map(const AbelianGroup& group, const IntMatrix& t, std::span<const Code> a) {
  std::vector<Code> out;
  out.reserve(t.size());
  for (const auto& row : t) out.push_back(combine(group, row, a));
  return out;
}

}  // namespace

Lattice standard_lattice(int n) {
  Lattice l;
  l.basis.assign(static_cast<std::size_t>(n), IntVector(static_cast<std::size_t>(n), 0));
  for (int i = 0; i < n; ++i) l.basis[i][i] = 1;
  return l;
}

Lattice make_lattice(const IntMatrix& generators, std::int64_t denominator) {
  if (generators.empty() || denominator < 1) throw Error("make_lattice: bad input");
  const std::size_t n = generators[0].size();
  Lattice l;
  l.basis = hermite_rows(generators, n);
  if (l.basis.size() != n) throw Error("make_lattice: generators do not span a full-rank lattice");
  i64 g = denominator;
  for (const auto& row : l.basis) g = std::gcd(g, content(row));
  for (auto& row : l.basis)
    for (auto& x : row) x /= g;
  l.denominator = denominator / g;
  return l;
}

std::int64_t lattice_index(const Lattice& super, const Lattice& sub) {
  const std::size_t n = super.basis.size();
  i128 num = std::abs(determinant(sub.basis));
  i128 den = std::abs(determinant(super.basis));
  for (std::size_t i = 0; i < n; ++i) {
    num *= super.denominator;
    den *= sub.denominator;
  }
  if (den == 0 || num % den != 0) throw Error("lattice_index: not a sublattice");
  return checked(num / den);
}

std::int64_t gaussian_binomial(int n, int r, int q) {
  if (r < 0 || r > n) return 0;
  i128 num = 1, den = 1;
  for (int i = 0; i < r; ++i) {
    i128 a = 1, b = 1;
    for (int t = 0; t < n - i; ++t) a *= q;
    for (int t = 0; t < i + 1; ++t) b *= q;
    num *= a - 1;
    den *= b - 1;
  }
  return checked(num / den);
}

std::vector<Lattice> enumerate_overlattices(int n, int ell, int r) {
  check_prime(ell);
  if (n < 1 || r < 1 || r > n) throw Error("overlattices: r must lie in [1, n]");
  std::vector<Lattice> out;
  for (const auto& u : subspaces(n, ell, r)) {
    IntMatrix gens = u;
    for (int i = 0; i < n; ++i) {
      IntVector row(static_cast<std::size_t>(n), 0);
      row[i] = ell;
      gens.push_back(std::move(row));
    }
    out.push_back(make_lattice(gens, ell));
  }
  return out;
}

std::vector<Lattice> enumerate_sublattices(int n, int ell, int r) {
  check_prime(ell);
  if (n < 1 || r < 1 || r > n) throw Error("sublattices: r must lie in [1, n]");
  std::vector<Lattice> out;
  for (const auto& w : subspaces(n, ell, n - r)) {
    IntMatrix gens = w;
    for (int i = 0; i < n; ++i) {
      IntVector row(static_cast<std::size_t>(n), 0);
      row[i] = ell;
      gens.push_back(std::move(row));
    }
    out.push_back(make_lattice(gens, 1));
  }
  return out;
}

SimplicialCone standard_octant(int n) {
  SimplicialCone c;
  c.generators = standard_lattice(n).basis;
  return c;
}

std::int64_t multiplicity(const SimplicialCone& cone, const Lattice& lattice) {
  return std::abs(determinant(cone_in_lattice(cone, lattice)));
}

std::vector<SimplicialCone> subdivide_to_basic(const SimplicialCone& cone, const Lattice& lattice) {
  std::vector<IntMatrix> pieces;
  subdivide(cone_in_lattice(cone, lattice), pieces);
  std::vector<SimplicialCone> out;
  for (const auto& f : pieces) out.push_back(cone_to_ambient(f, lattice));
  return out;
}

std::vector<Code> symbol_of_cone(const AbelianGroup& group, const SimplicialCone& cone,
                                 const Lattice& lattice, std::span<const Code> chi) {
  if (chi.size() != lattice.basis.size()) throw Error("symbol_of_cone: wrong number of characters");
  return apply_map(group, vector_map(cone_in_lattice(cone, lattice), lattice), chi);
}

std::vector<Code> covector_symbol_of_cone(const AbelianGroup& group, const SimplicialCone& cone,
                                          const Lattice& lattice, std::span<const Code> chi) {
  if (chi.size() != lattice.basis.size()) throw Error("symbol_of_cone: wrong number of characters");
  return apply_map(group, covector_map(cone_in_lattice(cone, lattice), lattice), chi);
}

HeckeMatrix hecke_matrix(const SymbolIndex& index, int ell, int r, const HeckeOptions& options) {
  const int n = index.arity();
  const auto& group = index.group();
  check_prime(ell);
  if (group.order() % ell == 0) throw Error("Hecke operator: l must be coprime to |G|");
  if (r < 1 || r > n || (r == n && !options.allow_full_rank))
    throw Error("Hecke operator: r must lie in [1, n-1] (r = n needs allow_full_rank)");
  HeckeMatrix h;
  h.ell = ell;
  h.r = r;
  h.flavor = index.flavor();
  const bool covector = h.flavor == Flavor::Mstar;
  if (h.flavor == Flavor::B) throw Error("Hecke operators are defined on M, Mstar and Mminus");
  const auto lattices = covector ? enumerate_sublattices(n, ell, r) : enumerate_overlattices(n, ell, r);
  const auto octant = standard_octant(n);
  for (const auto& lattice : lattices) {
    std::vector<IntMatrix> pieces;
    subdivide(cone_in_lattice(octant, lattice), pieces);
    for (const auto& f : pieces)
      h.cone_maps.push_back(covector ? covector_map(f, lattice) : vector_map(f, lattice));
  }
  h.images = SparseMatrix(index.size());
  SparseRow row;
  for (std::size_t c = 0; c < index.size(); ++c) {
    row.clear();
    for (const auto& t : h.cone_maps) {
      auto image = apply_map(group, t, index.at(c).view());
      auto loc = index.locate(image);
      if (loc.coefficient != 0) row.push_back({loc.column, loc.coefficient});
    }
    h.images.add_row(row);
  }
  return h;
}

std::vector<std::vector<Code>> hecke_terms(const AbelianGroup& group, const HeckeMatrix& hecke,
                                           std::span<const Code> tuple) {
  std::vector<std::vector<Code>> out;
  for (const auto& t : hecke.cone_maps) out.push_back(apply_map(group, t, tuple));
  return out;
}

DenseModMatrix induced_on_quotient(const HeckeMatrix& hecke, const SparseMatrix& relations,
                                   const ModpEchelon& echelon) {
  if (hecke.images.rows() != relations.cols()) throw Error("Hecke matrix and relations use different indices");
  const auto& free = echelon.free_cols();
  const std::size_t q = free.size();
  DenseModMatrix m(q, std::vector<std::uint32_t>(q, 0));
  for (std::size_t j = 0; j < q; ++j) {
    auto coords = echelon.project(hecke.images.row(free[j]));
    for (std::size_t i = 0; i < q; ++i) m[i][j] = coords[i];
  }
  for (std::size_t r = 0; r < relations.rows(); ++r) {
    SymbolVector image;
    for (const auto& e : relations.row(r))
      for (const auto& t : hecke.images.row(e.col)) image.add(t.col, e.value * t.value);
    auto row = image.to_row();
    if (!echelon.in_rowspan(row))
      throw Error("Hecke operator maps relation row " + std::to_string(r) + " outside the relation span");
  }
  return m;
}

DenseModMatrix induced_on_quotient(const HeckeMatrix& hecke, const SparseMatrix& relations, std::uint32_t p) {
  EliminationOptions o;
  o.keep_pivots = true;
  return induced_on_quotient(hecke, relations, ModpEchelon(relations, p, o));
}

}  // namespace birsym
