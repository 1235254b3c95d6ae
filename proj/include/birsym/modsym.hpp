#pragma once

// Weight-2 Manin symbols (c, d) for Gamma_1(N) and their iota-minus part.
//
// Full space: generators (c, d) with gcd(c, d, N) = 1, relations
//   (1) (c, d) = -(d, -c)          folded into the canonical sign
//   (2) (c, d) + (d, -c-d) + (-c-d, c) = 0.
// Minus space: relations
//   (R1) (a1, a2) = (a2, a1)       folded
//   (R2) (a1, a2) = (a1, a2 - a1) + (a1 - a2, a2)
//   (R3) (a1, a2) = -(a2, -a1)     folded
// with (R2*) (a1, a2) = (a1 + a2, a2) + (a1, a1 + a2) as an alternative.

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "birsym/algebra.hpp"
#include "birsym/exactla.hpp"
#include "birsym/sparse.hpp"

namespace birsym {

struct ManinSymbol {
  std::int64_t c = 0;
  std::int64_t d = 0;
  friend bool operator==(const ManinSymbol&, const ManinSymbol&) = default;
  friend auto operator<=>(const ManinSymbol&, const ManinSymbol&) = default;
};

struct ManinCanonical {
  ManinSymbol symbol;
  int sign = 1;  // 0 when the symbol equals its own negative
};

// Minimum over the orbit of the folded identifications, with the sign
// relating the input to it.
ManinCanonical canonicalize_manin(std::int64_t N, ManinSymbol s, bool minus);

enum class ManinR2 { Standard, Covector };

class ManinSystem {
 public:
  ManinSystem(std::int64_t N, bool minus, ManinR2 r2 = ManinR2::Standard);

  std::int64_t level() const { return N_; }
  bool minus() const { return minus_; }
  std::size_t symbols() const { return symbols_.size(); }
  std::size_t relations() const { return matrix_.rows(); }
  const std::vector<ManinSymbol>& basis() const { return symbols_; }
  const SparseMatrix& matrix() const { return matrix_; }

  // Column and coefficient of (c, d); coefficient 0 when it vanishes.
  struct Term {
    std::uint32_t column = 0;
    int coefficient = 0;
  };
  Term locate(std::int64_t c, std::int64_t d) const;

 private:
  std::int64_t N_;
  bool minus_;
  std::vector<ManinSymbol> symbols_;
  std::unordered_map<std::int64_t, std::uint32_t> lookup_;  // c * N + d
  SparseMatrix matrix_{0};
};

ManinSystem build_manin_system(std::int64_t N);
ManinSystem build_manin_minus_system(std::int64_t N, ManinR2 r2 = ManinR2::Standard);

struct CuspCounts {
  std::int64_t C = 0;
  std::int64_t C2 = 0;
};
CuspCounts cusp_counts(std::int64_t N);

struct ModsymReport {
  std::int64_t N = 0;
  std::size_t dim = 0;
  std::size_t dim_minus = 0;
  CuspCounts cusps;
  // g solved from dim = 2g + C - 1; empty when that is not a nonnegative integer
  std::optional<std::int64_t> genus;
  // dim_minus == g + (C - C2) / 2
  bool minus_formula_holds() const;
  std::string csv() const;
  static std::string csv_header();
};

ModsymReport modsym_dimensions(std::int64_t N, const std::vector<std::uint32_t>& primes);

struct ManinComparison {
  std::int64_t N = 0;
  std::size_t dim_symbol_group = 0;  // dim M-_2(Z/N) (x) Q
  std::size_t dim_manin_minus = 0;
  std::size_t rows_checked = 0;
  std::size_t rows_outside = 0;  // M-_2 relation rows not mapped into the Manin span
  bool ok() const { return dim_symbol_group == dim_manin_minus && rows_outside == 0; }
};

ManinComparison compare_with_symbol_group(std::int64_t N, const std::vector<std::uint32_t>& primes);

}  // namespace birsym
