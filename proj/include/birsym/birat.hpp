#pragma once

// The invariant beta(X) in B_n(G) from fixed-locus data, and the change of
// beta under a blowup along a G-stable center, one center at a time.
//
// Near a point z of the center the tangent characters split as
//   0^{d1} | 0^{d2} | b_1..b_{d3} | (a^1)^{kappa_1} .. (a^m)^{kappa_m}
// with T_z X^G of dimension d1 + d2 and T_z W of dimension d2 + d3.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "birsym/algebra.hpp"
#include "birsym/relations.hpp"

namespace birsym {

struct FixedComponent {
  std::string label;  // optional, for the refined invariant
  std::vector<Code> characters;
};

struct FixedLocusData {
  AbelianGroup group{std::vector<std::int64_t>{1}};
  int n = 0;
  std::vector<FixedComponent> components;
};

// Text format: one component per line, "label : entries" or just "entries",
// entries as in parse_tuple ("1,2" over Z/N, "1,0;0,1" in general).
// Lines starting with '#' are comments.
FixedLocusData read_fixed_locus(std::istream& in, const AbelianGroup& group);
void write_fixed_locus(std::ostream& out, const FixedLocusData& data);

enum class BlowupCase { I, II, III };

struct BlowupSpec {
  BlowupCase kind = BlowupCase::I;
  int d1 = 0, d2 = 0, d3 = 0, d4 = 0;
  std::vector<Code> b;      // d3 nonzero characters
  std::vector<Code> a;      // m distinct nonzero characters
  std::vector<int> kappa;   // multiplicities, summing to d4

  int n() const { return d1 + d2 + d3 + d4; }
  // Throws on any violated constraint, including the span condition.
  void validate(const AbelianGroup& group) const;
  // Character tuple of the component through the center.
  std::vector<Code> center_tuple() const;
};

// Sum of the canonical B-symbols of the components. With a label only the
// components carrying it count, which gives the per-label refined classes.
SymbolVector beta_class(const SymbolIndex& index, const FixedLocusData& data,
                        const std::optional<std::string>& label = std::nullopt);

// Added minus removed symbols near the center.
SymbolVector blowup_delta(const SymbolIndex& index, const BlowupSpec& spec);

// Fixed-locus data after the blowup. Case I removes the component through
// the center, which must be present.
FixedLocusData apply_blowup(const FixedLocusData& data, const BlowupSpec& spec);

enum class SpanField { Q, Z };

// True iff beta is unchanged by the blowup, i.e. the delta lies in the row
// span of the B-relations over the chosen ring (Q decided modulo `primes`).
bool certify_invariance(const FixedLocusData& data, const BlowupSpec& spec, const RelationSystem& relations,
                        SpanField field = SpanField::Q,
                        const std::vector<std::uint32_t>& primes = {1000003, 998244353});

}  // namespace birsym
