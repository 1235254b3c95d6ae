#include "birsym/birat.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include "birsym/exactla.hpp"

namespace birsym {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<Code> sorted(std::vector<Code> v) {
  std::sort(v.begin(), v.end());
  return v;
}

void add_symbol(SymbolVector& v, const SymbolIndex& index, std::span<const Code> tuple, std::int64_t coef) {
  const auto t = index.locate(tuple);
  if (t.coefficient != 0) v.add(t.column, coef * t.coefficient);
}

// The m new components over the center, in the order of the a^i.
std::vector<std::vector<Code>> new_components(const AbelianGroup& group, const BlowupSpec& spec) {
  std::vector<std::vector<Code>> out;
  if (spec.kind == BlowupCase::III) return out;
  for (std::size_t i = 0; i < spec.a.size(); ++i) {
    const Code ai = spec.a[i];
    std::vector<Code> t;
    if (spec.kind == BlowupCase::II) t.insert(t.end(), spec.d1, group.neg(ai));
    for (std::size_t j = 0; j < spec.a.size(); ++j) {
      if (j == i) {
        t.push_back(ai);
        t.insert(t.end(), spec.kappa[j] - 1, Code{0});
      } else {
        t.insert(t.end(), spec.kappa[j], group.sub(spec.a[j], ai));
      }
    }
    t.insert(t.end(), spec.b.begin(), spec.b.end());
    t.insert(t.end(), spec.d2, Code{0});
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

FixedLocusData read_fixed_locus(std::istream& in, const AbelianGroup& group) {
  FixedLocusData data;
  data.group = group;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    FixedComponent comp;
    std::string body = line;
    if (const auto colon = line.find(':'); colon != std::string::npos) {
      comp.label = trim(line.substr(0, colon));
      body = line.substr(colon + 1);
    }
    comp.characters = parse_tuple(group, body);
    const int n = static_cast<int>(comp.characters.size());
    if (data.n == 0) data.n = n;
    if (n != data.n)
      throw Error("fixed locus line " + std::to_string(lineno) + ": expected " + std::to_string(data.n) +
                  " characters");
    if (!group.spans(comp.characters))
      throw Error("fixed locus line " + std::to_string(lineno) + ": characters do not span A");
    data.components.push_back(std::move(comp));
  }
  return data;
}

void write_fixed_locus(std::ostream& out, const FixedLocusData& data) {
  for (const auto& comp : data.components) {
    if (!comp.label.empty()) out << comp.label << " : ";
    out << format_symbol(data.group, make_key(sorted(comp.characters))) << '\n';
  }
}

void BlowupSpec::validate(const AbelianGroup& group) const {
  if (d1 < 0 || d2 < 0 || d3 < 0 || d4 < 0) throw Error("blowup: negative dimension");
  if (n() < 1 || n() > kMaxArity) throw Error("blowup: n outside [1, " + std::to_string(kMaxArity) + "]");
  if (d3 + d4 < 1) throw Error("blowup: need d3 + d4 >= 1");
  if (d1 + d4 < 2) throw Error("blowup: need d1 + d4 >= 2 (codim W >= 2)");
  switch (kind) {
    case BlowupCase::I:
      if (d1 != 0 || d4 < 2) throw Error("blowup case I needs d1 = 0 and d4 >= 2");
      break;
    case BlowupCase::II:
      if (d1 < 1 || d4 < 1) throw Error("blowup case II needs d1, d4 >= 1");
      break;
    case BlowupCase::III:
      if (d1 < 2 || d3 < 1 || d4 != 0) throw Error("blowup case III needs d1 >= 2, d3 >= 1, d4 = 0");
      break;
  }
  if (static_cast<int>(b.size()) != d3) throw Error("blowup: expected d3 characters b_j");
  for (Code x : b)
    if (x == 0) throw Error("blowup: characters b_j must be nonzero");
  if (a.size() != kappa.size()) throw Error("blowup: one multiplicity per character a^i");
  int total = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) throw Error("blowup: characters a^i must be nonzero");
    if (kappa[i] < 1) throw Error("blowup: multiplicities must be >= 1");
    for (std::size_t j = 0; j < i; ++j)
      if (a[j] == a[i]) throw Error("blowup: characters a^i must be distinct");
    total += kappa[i];
  }
  if (total != d4) throw Error("blowup: multiplicities must sum to d4");
  for (Code x : center_tuple())
    if (x >= group.order()) throw Error("blowup: character outside the group");
  if (!group.spans(center_tuple())) throw Error("blowup: characters at the center do not span A");
}

std::vector<Code> BlowupSpec::center_tuple() const {
  std::vector<Code> t(static_cast<std::size_t>(d1 + d2), Code{0});
  t.insert(t.end(), b.begin(), b.end());
  for (std::size_t i = 0; i < a.size(); ++i) t.insert(t.end(), kappa[i], a[i]);
  return t;
}

SymbolVector beta_class(const SymbolIndex& index, const FixedLocusData& data,
                        const std::optional<std::string>& label) {
  if (index.flavor() != Flavor::B) throw Error("beta: expected an index of B-symbols");
  SymbolVector v;
  for (const auto& comp : data.components) {
    if (label && comp.label != *label) continue;
    if (static_cast<int>(comp.characters.size()) != index.arity())
      throw Error("beta: component arity differs from n");
    if (!index.group().spans(comp.characters)) throw Error("beta: component characters do not span A");
    add_symbol(v, index, comp.characters, 1);
  }
  return v;
}

SymbolVector blowup_delta(const SymbolIndex& index, const BlowupSpec& spec) {
  spec.validate(index.group());
  if (spec.n() != index.arity()) throw Error("blowup: spec dimension differs from n");
  SymbolVector v;
  for (const auto& t : new_components(index.group(), spec)) add_symbol(v, index, t, 1);
  if (spec.kind == BlowupCase::I) add_symbol(v, index, spec.center_tuple(), -1);
  return v;
}

FixedLocusData apply_blowup(const FixedLocusData& data, const BlowupSpec& spec) {
  spec.validate(data.group);
  if (spec.n() != data.n) throw Error("blowup: spec dimension differs from the fixed-locus data");
  FixedLocusData out = data;
  if (spec.kind == BlowupCase::I) {
    const auto center = sorted(spec.center_tuple());
    auto it = std::find_if(out.components.begin(), out.components.end(),
                           [&](const FixedComponent& c) { return sorted(c.characters) == center; });
    if (it == out.components.end()) throw Error("blowup case I: no fixed component through the center");
    out.components.erase(it);
  }
  for (auto& t : new_components(data.group, spec)) out.components.push_back({"", std::move(t)});
  return out;
}

bool certify_invariance(const FixedLocusData& data, const BlowupSpec& spec, const RelationSystem& relations,
                        SpanField field, const std::vector<std::uint32_t>& primes) {
  const auto& index = relations.index();
  if (index.flavor() != Flavor::B) throw Error("certify: expected B-relations");
  if (!(index.group() == data.group) || index.arity() != data.n)
    throw Error("certify: relations and fixed-locus data use different G or n");
  SymbolVector delta = beta_class(index, apply_blowup(data, spec));
  delta -= beta_class(index, data);
  if (!(delta == blowup_delta(index, spec))) throw Error("certify: blowup bookkeeping is inconsistent");
  const SparseRow row = delta.to_row();
  if (row.empty()) return true;
  if (field == SpanField::Z) return in_rowspan_z(relations.matrix(), row);
  return in_rowspan_q(relations.matrix(), row, primes);
}

}  // namespace birsym
