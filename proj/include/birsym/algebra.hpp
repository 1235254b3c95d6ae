#pragma once

// Finite abelian groups, their characters and canonical symbols.
//
// A group is a product of cyclic factors Z/N_1 x ... x Z/N_m in the order the
// caller gives; it is identified with its character group coordinatewise.
// Elements are handled internally as mixed-radix codes in [0, |G|) with the
// first factor most significant, so comparing codes is the same as comparing
// residue vectors lexicographically.

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace birsym {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Code = std::uint32_t;

inline constexpr int kMaxArity = 8;

enum class Flavor { B, M, Mstar, Mminus };

std::string to_string(Flavor flavor);
Flavor parse_flavor(const std::string& text);

struct GroupElement {
  std::vector<std::int64_t> residues;

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

class AbelianGroup {
 public:
  explicit AbelianGroup(std::vector<std::int64_t> moduli);
  static AbelianGroup cyclic(std::int64_t order);

  const std::vector<std::int64_t>& moduli() const { return moduli_; }
  std::size_t factor_count() const { return moduli_.size(); }
  std::int64_t order() const { return order_; }
  // True when the presentation has a single factor of size > 1 (or none).
  bool is_cyclic() const;
  // Order of the cyclic group; throws unless is_cyclic().
  std::int64_t cyclic_order() const;
  std::int64_t euler_phi() const;

  Code encode(const GroupElement& element) const;
  GroupElement decode(Code code) const;
  Code encode_residues(std::span<const std::int64_t> residues) const;

  Code zero() const { return 0; }
  Code add(Code a, Code b) const;
  Code sub(Code a, Code b) const;
  Code neg(Code a) const;
  Code scale(Code a, std::int64_t factor) const;
  bool is_two_torsion(Code a) const { return neg(a) == a; }

  bool spans(std::span<const Code> elements) const;
  bool spans(const std::vector<GroupElement>& elements) const;

  std::string format(Code code) const;
  Code parse(const std::string& text) const;

  friend bool operator==(const AbelianGroup& a, const AbelianGroup& b) {
    return a.moduli_ == b.moduli_;
  }

 private:
  std::vector<std::int64_t> moduli_;
  std::vector<std::int64_t> radix_;  // place value of each factor
  std::int64_t order_ = 1;
  std::int64_t single_ = 0;  // order when cyclic with one nontrivial factor
};

// Sorted tuple of codes; the canonical representative under permutations.
struct SymbolKey {
  std::array<Code, kMaxArity> entries{};
  std::uint8_t arity = 0;

  std::span<const Code> view() const { return {entries.data(), arity}; }
  Code operator[](std::size_t i) const { return entries[i]; }

  friend bool operator==(const SymbolKey& a, const SymbolKey& b) {
    if (a.arity != b.arity) return false;
    for (int i = 0; i < a.arity; ++i)
      if (a.entries[i] != b.entries[i]) return false;
    return true;
  }
  friend bool operator<(const SymbolKey& a, const SymbolKey& b) {
    for (int i = 0; i < std::min(a.arity, b.arity); ++i)
      if (a.entries[i] != b.entries[i]) return a.entries[i] < b.entries[i];
    return a.arity < b.arity;
  }
};

struct SymbolKeyHash {
  std::size_t operator()(const SymbolKey& key) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ key.arity;
    for (int i = 0; i < key.arity; ++i) {
      h ^= key.entries[i] + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h * 0xff51afd7ed558ccdULL);
  }
};

SymbolKey make_key(std::span<const Code> entries);

struct Symbol {
  SymbolKey key;
  Flavor flavor = Flavor::M;

  std::size_t arity() const { return key.arity; }
  friend bool operator==(const Symbol&, const Symbol&) = default;
};

struct Canonical {
  Symbol symbol;
  int coefficient = 1;  // +1/-1, or 0 for a self-negating M- symbol
};

Canonical canonicalize(const AbelianGroup& group, std::span<const Code> tuple,
                       Flavor flavor);
Canonical canonicalize(const AbelianGroup& group,
                       const std::vector<GroupElement>& tuple, Flavor flavor);

// Canonical M- representative ignoring self-negation: each entry replaced by
// min(a, -a) and sorted. `flips` receives the parity sign of the flips used
// on entries that are not 2-torsion.
SymbolKey minus_representative(const AbelianGroup& group,
                               std::span<const Code> tuple, int* sign);
bool is_self_negating(const AbelianGroup& group, const SymbolKey& key);

struct EnumerationOptions {
  // M- only: keep self-negating symbols as ordinary columns (for F_2 work).
  bool keep_self_negating = false;
};

class SymbolIndex {
 public:
  SymbolIndex() = default;
  SymbolIndex(AbelianGroup group, int arity, Flavor flavor,
              std::vector<SymbolKey> symbols, std::size_t dropped_self_negating,
              bool keeps_self_negating);

  const AbelianGroup& group() const { return group_; }
  int arity() const { return arity_; }
  Flavor flavor() const { return flavor_; }
  std::size_t size() const { return symbols_.size(); }
  const std::vector<SymbolKey>& symbols() const { return symbols_; }
  const SymbolKey& at(std::size_t column) const { return symbols_.at(column); }
  Symbol symbol(std::size_t column) const { return {symbols_.at(column), flavor_}; }
  std::optional<std::uint32_t> find(const SymbolKey& key) const;
  std::size_t dropped_self_negating() const { return dropped_self_negating_; }
  bool keeps_self_negating() const { return keeps_self_negating_; }

  // Canonicalizes `tuple` for this index's flavor and looks it up. Returns the
  // column and signed coefficient; coefficient 0 means the term vanishes.
  struct Term {
    std::uint32_t column = 0;
    int coefficient = 0;
  };
  Term locate(std::span<const Code> tuple) const;

 private:
  AbelianGroup group_{std::vector<std::int64_t>{1}};
  int arity_ = 0;
  Flavor flavor_ = Flavor::M;
  std::vector<SymbolKey> symbols_;
  std::unordered_map<SymbolKey, std::uint32_t, SymbolKeyHash> lookup_;
  std::size_t dropped_self_negating_ = 0;
  bool keeps_self_negating_ = false;
};

SymbolIndex enumerate_symbols(const AbelianGroup& group, int arity,
                              Flavor flavor,
                              const EnumerationOptions& options = {});

// Calls `visit` on every sorted arity-tuple of codes (multisets) in
// lexicographic order.
void for_each_multiset(std::int64_t universe, int arity,
                       const std::function<void(std::span<const Code>)>& visit);

// Line-based symbol list: one symbol per line, entries separated by ';',
// residues of an entry separated by ','.
void write_symbols(std::ostream& out, const SymbolIndex& index);
std::vector<SymbolKey> read_symbols(std::istream& in, const AbelianGroup& group);
std::string format_symbol(const AbelianGroup& group, const SymbolKey& key);
std::vector<Code> parse_tuple(const AbelianGroup& group, const std::string& text);

std::int64_t euler_phi(std::int64_t n);

}  // namespace birsym
