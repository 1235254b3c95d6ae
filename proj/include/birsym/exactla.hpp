#pragma once

// Exact linear algebra over F_p and Z for relation matrices.
//
// Ranks over F_p use right-looking sparse elimination: the pivot column is the
// active column with the fewest entries (smallest index on ties), the pivot
// row the shortest row in it. When the active block gets dense enough it is
// finished by dense elimination. Q-ranks are the maximum over several large
// primes. Over Z, a quotient Z^m / rowspan is described by eliminating unit
// pivots sparsely and diagonalizing the remaining core with GMP.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "birsym/sparse.hpp"

namespace birsym {

bool is_prime(std::uint64_t n);

// Primes in (2^30, 2^31) drawn from a seeded generator, skipping divisors of
// `avoid` (pass |G|).
std::vector<std::uint32_t> pick_primes(std::size_t count, std::uint64_t seed = 1,
                                       std::int64_t avoid = 1);

std::uint32_t inverse_mod(std::uint32_t a, std::uint32_t p);
inline std::uint32_t reduce_mod(std::int64_t v, std::uint32_t p) {
  std::int64_t r = v % static_cast<std::int64_t>(p);
  return static_cast<std::uint32_t>(r < 0 ? r + p : r);
}

struct EliminationOptions {
  // Switch to dense elimination when the active block has density above
  // `dense_density`, or has at most `dense_small_cols` columns; either way only
  // if it holds at most `dense_max_cells` entries.
  double dense_density = 0.20;
  std::size_t dense_small_cols = 5000;
  std::size_t dense_max_cells = std::size_t{1} << 25;
  // Keep the pivot rows so vectors can be reduced modulo the row span.
  bool keep_pivots = false;
};

struct ModEntry {
  std::uint32_t col;
  std::uint32_t value;
};
using ModRow = std::vector<ModEntry>;

// Echelon data of a matrix over F_p. Pivot row t is monic in column
// pivot_cols[t] and vanishes on pivot_cols[s] for s < t.
class ModpEchelon {
 public:
  ModpEchelon(const SparseMatrix& matrix, std::uint32_t p, const EliminationOptions& options = {});

  std::uint32_t prime() const { return p_; }
  std::size_t rank() const { return pivot_cols_.size(); }
  std::size_t cols() const { return ncols_; }
  const std::vector<std::uint32_t>& pivot_cols() const { return pivot_cols_; }
  // Non-pivot columns in increasing order; their classes form a basis of the
  // quotient F_p^cols / rowspan.
  const std::vector<std::uint32_t>& free_cols() const { return free_cols_; }
  bool has_pivots() const { return keep_; }
  std::size_t dense_switch_at() const { return dense_switch_at_; }

  // Reduces a dense vector modulo the row span in place; afterwards only free
  // columns can be nonzero. Requires keep_pivots.
  void reduce(std::vector<std::uint32_t>& v) const;
  // Coordinates of a sparse integer vector in the free-column basis.
  std::vector<std::uint32_t> project(std::span<const Entry> v) const;
  bool in_rowspan(std::span<const Entry> v) const;

 private:
  std::uint32_t p_;
  std::size_t ncols_;
  bool keep_;
  std::size_t dense_switch_at_ = 0;
  std::vector<std::uint32_t> pivot_cols_;
  std::vector<ModRow> pivot_rows_;
  std::vector<std::uint32_t> free_cols_;
  std::vector<std::int64_t> free_pos_;

  friend class ModpEliminator;
};

std::size_t rank_mod_p(const SparseMatrix& matrix, std::uint32_t p,
                       const EliminationOptions& options = {});

struct PrimeRank {
  std::uint32_t prime = 0;
  std::size_t rank = 0;
  double seconds = 0;
};

struct RankReport {
  std::vector<PrimeRank> per_prime;
  std::size_t rank = 0;  // maximum over primes
  bool agree = true;
  double seconds = 0;
};

// Primes are processed `threads` at a time.
RankReport rank_q(const SparseMatrix& matrix, const std::vector<std::uint32_t>& primes,
                  const EliminationOptions& options = {}, std::size_t threads = 1);

// Membership in the Q-row span, decided modulo each prime in `primes`.
bool in_rowspan_q(const SparseMatrix& relations, std::span<const Entry> v,
                  const std::vector<std::uint32_t>& primes);

// Columns reachable from `seed` through rows sharing a column.
std::vector<std::uint32_t> support_closure(const SparseMatrix& relations,
                                           std::span<const Entry> seed);

// The abelian group Z^cols / rowspan(relations) with coordinates for vectors.
class IntegerQuotient {
 public:
  // `columns`, when given, restricts to those columns and to the rows living
  // entirely inside them. `dense_budget` bounds rows*cols of the GMP core.
  explicit IntegerQuotient(const SparseMatrix& relations,
                           std::optional<std::vector<std::uint32_t>> columns = std::nullopt,
                           std::size_t dense_budget = std::size_t{1} << 24);

  // Invariant factors d_1 | d_2 | ... greater than one.
  std::vector<mpz_class> torsion() const;
  std::size_t free_rank() const { return free_rank_; }
  std::size_t core_rows() const { return core_rows_; }
  std::size_t core_cols() const { return core_cols_.size(); }

  // Smallest d >= 1 with d*v in the row span, or nullopt when v has infinite
  // order. Entries of v outside the column set must be zero.
  std::optional<mpz_class> order(std::span<const Entry> v) const;
  bool contains(std::span<const Entry> v) const;

 private:
  std::vector<mpz_class> coordinates(std::span<const Entry> v) const;

  std::size_t ncols_ = 0;
  std::vector<std::int64_t> local_;  // global column -> local, or -1
  // Unit-pivot substitutions in elimination order: column and its row.
  std::vector<std::uint32_t> sub_cols_;
  std::vector<SparseRow> sub_rows_;
  std::vector<std::uint32_t> core_cols_;  // local columns left for the core
  std::vector<std::int64_t> core_pos_;
  std::size_t core_rows_ = 0;
  std::vector<std::vector<mpz_class>> transform_;  // core column transform V
  std::vector<mpz_class> diagonal_;                // diagonal of U*A*V
  std::size_t free_rank_ = 0;
};

// Elementary divisors (> 1) of the relation matrix's cokernel. Throws when the
// dense core exceeds `dense_budget` cells.
std::vector<mpz_class> snf(const SparseMatrix& relations, std::size_t dense_budget = std::size_t{1} << 24);

// Smallest d with d*v in the Z-row span (nullopt = infinite), computed on the
// support closure of v.
std::optional<mpz_class> element_order(const SparseMatrix& relations, std::span<const Entry> v,
                                       std::size_t dense_budget = std::size_t{1} << 24);
bool in_rowspan_z(const SparseMatrix& relations, std::span<const Entry> v,
                  std::size_t dense_budget = std::size_t{1} << 24);

using DenseModMatrix = std::vector<std::vector<std::uint32_t>>;

// Coefficients c_0..c_n of det(xI - A) over F_p, lowest degree first.
std::vector<std::uint32_t> charpoly_mod_p(const DenseModMatrix& a, std::uint32_t p);
DenseModMatrix multiply_mod_p(const DenseModMatrix& a, const DenseModMatrix& b, std::uint32_t p);

}  // namespace birsym
