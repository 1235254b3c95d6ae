#include "birsym/relations.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace birsym {

void SymbolVector::add(std::uint32_t column, std::int64_t value) {
  if (value == 0) return;
  auto [it, inserted] = coefficients.emplace(column, value);
  if (!inserted) {
    it->second += value;
    if (it->second == 0) coefficients.erase(it);
  }
}

SparseRow SymbolVector::to_row() const {
  SparseRow row;
  row.reserve(coefficients.size());
  for (const auto& [c, v] : coefficients) row.push_back({c, v});
  return row;
}

SymbolVector& SymbolVector::operator+=(const SymbolVector& other) {
  for (const auto& [c, v] : other.coefficients) add(c, v);
  return *this;
}

SymbolVector& SymbolVector::operator-=(const SymbolVector& other) {
  for (const auto& [c, v] : other.coefficients) add(c, -v);
  return *this;
}

SymbolVector SymbolVector::operator*(std::int64_t factor) const {
  SymbolVector out;
  if (factor == 0) return out;
  for (const auto& [c, v] : coefficients) out.coefficients.emplace(c, v * factor);
  return out;
}

std::vector<int> full_kset(int arity) {
  std::vector<int> ks;
  for (int k = 2; k <= arity; ++k) ks.push_back(k);
  return ks;
}

namespace {

void validate_kset(int arity, std::span<const int> kset) {
  if (arity < 1) throw Error("relations: n must be >= 1");
  if (arity == 1) return;
  if (kset.empty()) throw Error("relations: empty k set");
  for (int k : kset)
    if (k < 2 || k > arity)
      throw Error("relations: k=" + std::to_string(k) + " outside [2, " + std::to_string(arity) + "]");
}

struct InstanceBuilder {
  const AbelianGroup& group;
  int arity;
  Flavor flavor;
  std::vector<Code> values;     // distinct entries of the current symbol
  std::vector<int> counts;      // their multiplicities
  std::vector<int> take;        // multiplicity placed in the a-block
  std::vector<RelationInstance::Term> terms;

  void emit(std::span<const Code> lhs, const std::function<void(const RelationInstance&)>& visit) {
    terms.clear();
    const std::size_t t = values.size();
    Code sigma = 0;
    if (flavor == Flavor::Mstar)
      for (std::size_t j = 0; j < t; ++j) sigma = group.add(sigma, group.scale(values[j], take[j]));
    for (std::size_t i = 0; i < t; ++i) {
      if (take[i] == 0) continue;
      RelationInstance::Term term;
      int pos = 0;
      const Code pivot = values[i];
      for (std::size_t j = 0; j < t; ++j) {
        for (int c = 0; c < take[j]; ++c) {
          Code e;
          if (flavor == Flavor::Mstar) {
            e = (j == i && c == 0) ? sigma : values[j];
          } else if (j == i) {
            e = c == 0 ? pivot : 0;
          } else {
            e = group.sub(values[j], pivot);
          }
          term.entries[pos++] = e;
        }
      }
      for (std::size_t j = 0; j < t; ++j)
        for (int c = take[j]; c < counts[j]; ++c) term.entries[pos++] = values[j];
      // (B) keeps one term per distinct value; (M)/(M*) one per slot
      term.multiplicity = flavor == Flavor::B ? 1 : take[i];
      terms.push_back(term);
    }
    visit(RelationInstance{lhs, terms});
  }

  void choose(std::size_t j, int remaining, std::span<const Code> lhs,
              const std::function<void(const RelationInstance&)>& visit) {
    if (j == values.size()) {
      if (remaining == 0) emit(lhs, visit);
      return;
    }
    for (int x = std::min(remaining, counts[j]); x >= 0; --x) {
      take[j] = x;
      choose(j + 1, remaining - x, lhs, visit);
    }
    take[j] = 0;
  }
};

std::uint64_t row_hash(std::span<const Entry> row) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const auto& e : row) {
    h = (h ^ e.col) * 1099511628211ULL;
    h = (h ^ static_cast<std::uint64_t>(e.value)) * 1099511628211ULL;
  }
  return h;
}

// Normalizes the row and flips its sign so the first coefficient is positive.
void canonical_sign(SparseRow& row) {
  normalize_row(row);
  if (!row.empty() && row.front().value < 0)
    for (auto& e : row) e.value = -e.value;
}

void collect_rows(const SymbolIndex& index, std::span<const int> kset, const BuildOptions& options,
                  const std::function<void(SparseRow&)>& sink) {
  const auto& group = index.group();
  const Flavor flavor = index.flavor();
  const Flavor instance_flavor = flavor == Flavor::Mminus ? Flavor::M : flavor;
  SparseRow row;
  for_each_relation_instance(group, index.arity(), instance_flavor, kset,
                             [&](const RelationInstance& inst) {
                               row.clear();
                               auto lhs = index.locate(inst.lhs);
                               if (lhs.coefficient != 0) row.push_back({lhs.column, lhs.coefficient});
                               for (const auto& term : inst.rhs) {
                                 auto loc = index.locate(
                                     std::span<const Code>(term.entries.data(), inst.lhs.size()));
                                 if (loc.coefficient != 0)
                                   row.push_back({loc.column, -term.multiplicity * loc.coefficient});
                               }
                               canonical_sign(row);
                               if (!row.empty()) sink(row);
                             });
  if (flavor == Flavor::Mminus && options.keep_self_negating) {
    for (std::uint32_t c = 0; c < index.size(); ++c) {
      if (is_self_negating(group, index.at(c))) {
        row.assign(1, Entry{c, 2});
        sink(row);
      }
    }
  }
}

}  // namespace

void for_each_relation_instance(const AbelianGroup& group, int arity, Flavor flavor,
                                std::span<const int> kset,
                                const std::function<void(const RelationInstance&)>& visit) {
  validate_kset(arity, kset);
  if (arity == 1) return;
  if (flavor == Flavor::Mminus) flavor = Flavor::M;
  InstanceBuilder builder{group, arity, flavor, {}, {}, {}, {}};
  for_each_multiset(group.order(), arity, [&](std::span<const Code> s) {
    if (!group.spans(s)) return;
    builder.values.clear();
    builder.counts.clear();
    for (Code c : s) {
      if (!builder.values.empty() && builder.values.back() == c) {
        ++builder.counts.back();
      } else {
        builder.values.push_back(c);
        builder.counts.push_back(1);
      }
    }
    builder.take.assign(builder.values.size(), 0);
    for (int k : kset) builder.choose(0, k, s, visit);
  });
}

RelationSystem build_relations(const SymbolIndex& index, std::vector<int> kset,
                               const BuildOptions& options) {
  std::sort(kset.begin(), kset.end());
  kset.erase(std::unique(kset.begin(), kset.end()), kset.end());
  validate_kset(index.arity(), kset);
  SparseMatrix matrix(index.size());
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> seen;
  collect_rows(index, kset, options, [&](SparseRow& row) {
    if (options.deduplicate) {
      auto& bucket = seen[row_hash(row)];
      for (auto r : bucket) {
        auto existing = matrix.row(r);
        if (existing.size() == row.size() &&
            std::equal(existing.begin(), existing.end(), row.begin(), [](const Entry& a, const Entry& b) {
              return a.col == b.col && a.value == b.value;
            }))
          return;
      }
      bucket.push_back(static_cast<std::uint32_t>(matrix.rows()));
    }
    matrix.add_row(row);
  });
  return RelationSystem(index, std::move(matrix), std::move(kset));
}

RelationSystem build_relations(const AbelianGroup& group, int arity, Flavor flavor,
                               std::vector<int> kset, const BuildOptions& options) {
  EnumerationOptions eo;
  eo.keep_self_negating = options.keep_self_negating;
  return build_relations(enumerate_symbols(group, arity, flavor, eo), std::move(kset), options);
}

std::size_t export_relations_sms(const AbelianGroup& group, int arity, Flavor flavor,
                                 std::vector<int> kset, const std::string& path,
                                 const BuildOptions& options) {
  std::sort(kset.begin(), kset.end());
  kset.erase(std::unique(kset.begin(), kset.end()), kset.end());
  EnumerationOptions eo;
  eo.keep_self_negating = options.keep_self_negating;
  auto index = enumerate_symbols(group, arity, flavor, eo);
  SmsStreamWriter writer(path, index.size());
  // 64-bit fingerprints only; rows are not kept in memory in streaming mode
  std::unordered_set<std::uint64_t> seen;
  collect_rows(index, kset, options, [&](SparseRow& row) {
    if (options.deduplicate && !seen.insert(row_hash(row) ^ (row.size() << 56)).second) return;
    writer.add_row(row);
  });
  writer.close();
  return writer.rows();
}

SymbolVector combination(const SymbolIndex& index,
                         const std::vector<std::pair<std::vector<Code>, std::int64_t>>& terms) {
  SymbolVector out;
  for (const auto& [tuple, coefficient] : terms) {
    if (tuple.size() != static_cast<std::size_t>(index.arity()))
      throw Error("combination: tuple arity does not match the index");
    if (!index.group().spans(tuple)) throw Error("combination: tuple does not generate the group");
    auto loc = index.locate(tuple);
    if (loc.coefficient != 0) out.add(loc.column, coefficient * loc.coefficient);
  }
  return out;
}

}  // namespace birsym
