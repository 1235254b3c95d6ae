#pragma once

// Relation matrices presenting B_n(G), M_n(G), M*_n(G) and M-_n(G).
//
// Columns are the canonical symbols of a SymbolIndex; each row is the
// difference LHS - RHS of one blowup relation instance with a chosen block
// size k. For the M- flavor every M-relation instance is rewritten with the
// signed canonical representatives, which folds the anti-symmetry relation
// into the column basis.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "birsym/algebra.hpp"
#include "birsym/sparse.hpp"

namespace birsym {

struct SymbolVector {
  std::map<std::uint32_t, std::int64_t> coefficients;

  bool is_zero() const { return coefficients.empty(); }
  void add(std::uint32_t column, std::int64_t value);
  SparseRow to_row() const;
  SymbolVector& operator+=(const SymbolVector& other);
  SymbolVector& operator-=(const SymbolVector& other);
  SymbolVector operator*(std::int64_t factor) const;
  friend bool operator==(const SymbolVector&, const SymbolVector&) = default;
};

struct BuildOptions {
  // M- only: keep self-negating symbols as columns and add the rows 2*S.
  bool keep_self_negating = false;
  bool deduplicate = true;
};

class RelationSystem {
 public:
  RelationSystem(SymbolIndex index, SparseMatrix matrix, std::vector<int> kset)
      : index_(std::move(index)), matrix_(std::move(matrix)), kset_(std::move(kset)) {}

  const SymbolIndex& index() const { return index_; }
  const SparseMatrix& matrix() const { return matrix_; }
  Flavor flavor() const { return index_.flavor(); }
  const std::vector<int>& kset() const { return kset_; }
  std::size_t symbols() const { return index_.size(); }
  std::size_t relations() const { return matrix_.rows(); }

 private:
  SymbolIndex index_;
  SparseMatrix matrix_;
  std::vector<int> kset_;
};

// One relation instance: the LHS tuple and the signed RHS tuples. Tuples are
// not canonicalized.
struct RelationInstance {
  std::span<const Code> lhs;
  struct Term {
    std::array<Code, kMaxArity> entries{};
    std::int64_t multiplicity = 1;
  };
  std::span<const Term> rhs;
};

// Visits every relation instance of (B), (M) or (M*) (flavor Mminus is treated
// as M) with block size k in kset, one per canonical symbol and distinct
// sub-multiset of its entries.
void for_each_relation_instance(const AbelianGroup& group, int arity, Flavor flavor,
                                std::span<const int> kset,
                                const std::function<void(const RelationInstance&)>& visit);

std::vector<int> full_kset(int arity);

RelationSystem build_relations(const AbelianGroup& group, int arity, Flavor flavor,
                               std::vector<int> kset, const BuildOptions& options = {});
RelationSystem build_relations(const SymbolIndex& index, std::vector<int> kset,
                               const BuildOptions& options = {});

// Streams the relation rows straight to an SMS file; returns the row count.
std::size_t export_relations_sms(const AbelianGroup& group, int arity, Flavor flavor,
                                 std::vector<int> kset, const std::string& path,
                                 const BuildOptions& options = {});

// Canonicalizes each tuple and accumulates the signed coefficients.
SymbolVector combination(const SymbolIndex& index,
                         const std::vector<std::pair<std::vector<Code>, std::int64_t>>& terms);

}  // namespace birsym
