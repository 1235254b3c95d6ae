#pragma once

// Structure maps between symbol groups: mu: B_n -> M_n, multiplication nabla
// and comultiplication Delta for cyclic groups, and primitive parts.
//
// For G = Z/N a subgroup datum is a divisor d of N: G' is the subgroup of
// order d, its characters A' = Z/d are obtained by reduction mod d, and the
// characters of G'' = G/G' are A'' = d*Z/N, identified with Z/(N/d) via a/d.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "birsym/algebra.hpp"
#include "birsym/exactla.hpp"
#include "birsym/relations.hpp"

namespace birsym {

// A linear map given by the image of each source symbol. Targets that are
// tensor products of two symbol groups use column i1 * |second| + i2.
struct LinearMap {
  SymbolIndex source;
  std::vector<SymbolIndex> target;  // one index, or two tensor factors
  SparseMatrix images;              // row i = image of source symbol i

  std::size_t target_size() const;
  // Matrix in column-per-source convention (rows = target, cols = source).
  SparseMatrix matrix() const { return images.transpose(); }
  SymbolVector apply(std::span<const Entry> v) const;
};

struct SubquotientDatum {
  std::int64_t N = 1;
  std::int64_t d = 1;  // order of G'

  std::int64_t quotient_order() const { return N / d; }
  void validate() const;
};

LinearMap mu_map(const AbelianGroup& group, int n);

struct MuReport {
  std::size_t b_symbols = 0, m_symbols = 0;
  std::size_t rows_checked = 0;
  std::size_t rows_outside_q = 0;  // mu(B-row) not in the Q-span
  std::size_t rows_outside_z = 0;  // mu(B-row) not in the Z-span
  std::size_t dim_b = 0, dim_m = 0;
  bool surjective_mod_2 = false;  // rank test over odd primes
  bool ok() const { return rows_outside_q == 0 && rows_outside_z == 0 && surjective_mod_2; }
};

MuReport verify_mu(const AbelianGroup& group, int n, const std::vector<std::uint32_t>& primes);

// Elementary divisors (> 1) of M_n(G) / mu(B_n(G)).
std::vector<mpz_class> mu_cokernel(const AbelianGroup& group, int n);

// Images of the character tuples under Delta for one split n = n' + n''.
// Each term pairs a tuple over Z/d with a tuple over Z/(N/d).
struct DeltaTerm {
  std::vector<Code> first;
  std::vector<Code> second;
};
std::vector<DeltaTerm> delta_terms(const SubquotientDatum& datum, int n_first,
                                   std::span<const Code> tuple);

// Delta: M_n(G) -> M_{n'}(G') (x) M-_{n''}(G''); with minus_variant,
// Delta-: M-_n(G) -> M-_{n'}(G') (x) M-_{n''}(G'').
LinearMap delta_map(const SubquotientDatum& datum, int n_first, int n_second, bool minus_variant);

// nabla: M_{n'}(G') (x) M_{n''}(G'') -> M_n(G) (or the M- version): images of
// all generator pairs, one row per pair (i1 * |second| + i2).
LinearMap nabla_map(const SubquotientDatum& datum, int n_first, int n_second, bool minus_variant);

// Checks that every relation row of the source maps to zero in the tensor
// product of the target quotients over F_p.
bool verify_delta(const LinearMap& delta, std::uint32_t p);

struct DimensionReport {
  std::int64_t N = 0;
  int n = 0;
  std::string variant;
  std::vector<std::uint32_t> primes;
  std::vector<std::size_t> per_prime;
  std::size_t dim = 0;  // minimum over primes
  std::string csv() const;
};

// Dimension of the kernel of all one-step comultiplications on the quotient.
// variant Mminus uses 1 < d < N and Delta-, variant M uses 1 <= d < N and Delta.
DimensionReport primitive_dim(std::int64_t N, int n, Flavor variant,
                              const std::vector<std::uint32_t>& primes);
// Dimension of the cokernel of all one-step multiplications into M-_n(Z/N).
DimensionReport coprimitive_dim(std::int64_t N, int n, const std::vector<std::uint32_t>& primes);

}  // namespace birsym
