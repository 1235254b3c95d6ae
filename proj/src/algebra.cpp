#include "birsym/algebra.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace birsym {

namespace {

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

// Extended gcd: returns g = gcd(a, b) >= 0 and x, y with a*x + b*y = g.
std::int64_t ext_gcd(std::int64_t a, std::int64_t b, std::int64_t& x, std::int64_t& y) {
  std::int64_t old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    std::int64_t q = old_r / r;
    std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
    std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
    std::tie(old_t, t) = std::make_pair(t, old_t - q * t);
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  x = old_s;
  y = old_t;
  return old_r;
}

}  // namespace

std::string to_string(Flavor flavor) {
  switch (flavor) {
    case Flavor::B: return "B";
    case Flavor::M: return "M";
    case Flavor::Mstar: return "Mstar";
    case Flavor::Mminus: return "Mminus";
  }
  return "?";
}

Flavor parse_flavor(const std::string& text) {
  if (text == "B") return Flavor::B;
  if (text == "M") return Flavor::M;
  if (text == "Mstar" || text == "M*") return Flavor::Mstar;
  if (text == "Mminus" || text == "M-") return Flavor::Mminus;
  throw Error("unknown flavor '" + text + "' (expected B, M, Mstar or Mminus)");
}

std::int64_t euler_phi(std::int64_t n) {
  if (n < 1) throw Error("euler_phi: argument must be positive");
  std::int64_t result = n;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      result -= result / p;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

AbelianGroup::AbelianGroup(std::vector<std::int64_t> moduli) : moduli_(std::move(moduli)) {
  if (moduli_.empty()) moduli_.push_back(1);
  radix_.assign(moduli_.size(), 1);
  order_ = 1;
  for (std::size_t i = moduli_.size(); i-- > 0;) {
    if (moduli_[i] < 1) throw Error("group moduli must be >= 1");
    radix_[i] = order_;
    order_ *= moduli_[i];
    if (order_ > (std::int64_t{1} << 31)) throw Error("group order too large");
  }
  int nontrivial = 0;
  for (auto m : moduli_)
    if (m > 1) ++nontrivial;
  if (nontrivial <= 1) single_ = order_;
}

AbelianGroup AbelianGroup::cyclic(std::int64_t order) {
  return AbelianGroup(std::vector<std::int64_t>{order});
}

bool AbelianGroup::is_cyclic() const { return single_ != 0; }

std::int64_t AbelianGroup::cyclic_order() const {
  if (!is_cyclic()) throw Error("operation requires a cyclic group");
  return single_;
}

std::int64_t AbelianGroup::euler_phi() const { return birsym::euler_phi(cyclic_order()); }

Code AbelianGroup::encode_residues(std::span<const std::int64_t> residues) const {
  if (residues.size() != moduli_.size())
    throw Error("element has " + std::to_string(residues.size()) + " residues, group has " +
                std::to_string(moduli_.size()) + " factors");
  std::int64_t code = 0;
  for (std::size_t i = 0; i < moduli_.size(); ++i)
    code += floor_mod(residues[i], moduli_[i]) * radix_[i];
  return static_cast<Code>(code);
}

Code AbelianGroup::encode(const GroupElement& element) const {
  return encode_residues(element.residues);
}

GroupElement AbelianGroup::decode(Code code) const {
  GroupElement e;
  e.residues.resize(moduli_.size());
  std::int64_t c = code;
  for (std::size_t i = 0; i < moduli_.size(); ++i) {
    e.residues[i] = c / radix_[i];
    c %= radix_[i];
  }
  return e;
}

Code AbelianGroup::add(Code a, Code b) const {
  if (single_) {
    std::int64_t s = std::int64_t{a} + b;
    return static_cast<Code>(s >= single_ ? s - single_ : s);
  }
  std::int64_t result = 0, ca = a, cb = b;
  for (std::size_t i = 0; i < moduli_.size(); ++i) {
    std::int64_t da = ca / radix_[i], db = cb / radix_[i];
    ca %= radix_[i];
    cb %= radix_[i];
    std::int64_t s = da + db;
    if (s >= moduli_[i]) s -= moduli_[i];
    result += s * radix_[i];
  }
  return static_cast<Code>(result);
}

Code AbelianGroup::neg(Code a) const {
  if (single_) return a == 0 ? 0 : static_cast<Code>(single_ - a);
  std::int64_t result = 0, ca = a;
  for (std::size_t i = 0; i < moduli_.size(); ++i) {
    std::int64_t d = ca / radix_[i];
    ca %= radix_[i];
    result += (d == 0 ? 0 : moduli_[i] - d) * radix_[i];
  }
  return static_cast<Code>(result);
}

Code AbelianGroup::sub(Code a, Code b) const { return add(a, neg(b)); }

Code AbelianGroup::scale(Code a, std::int64_t factor) const {
  if (single_) return static_cast<Code>(floor_mod(static_cast<std::int64_t>(
                                            (static_cast<__int128>(a) * factor) % single_),
                                        single_));
  std::int64_t result = 0, ca = a;
  for (std::size_t i = 0; i < moduli_.size(); ++i) {
    std::int64_t d = ca / radix_[i];
    ca %= radix_[i];
    auto prod = static_cast<std::int64_t>((static_cast<__int128>(d) * factor) % moduli_[i]);
    result += floor_mod(prod, moduli_[i]) * radix_[i];
  }
  return static_cast<Code>(result);
}

bool AbelianGroup::spans(std::span<const Code> elements) const {
  if (single_) {
    std::int64_t g = single_;
    for (Code c : elements) g = std::gcd(g, static_cast<std::int64_t>(c));
    return g == 1;
  }
  // Column-echelonize the generators {a_j} together with {N_i e_i}; the span is
  // the whole group exactly when every pivot is a unit. Entries of row i may be
  // reduced mod N_i at any time since N_i e_i lies in the lattice.
  const std::size_t m = moduli_.size();
  std::vector<std::vector<std::int64_t>> cols;
  for (Code c : elements) cols.push_back(decode(c).residues);
  for (std::size_t r = 0; r < m; ++r) {
    // combine all remaining columns into one with entry gcd in row r
    std::int64_t g = moduli_[r];  // contribution of N_r e_r
    std::vector<std::int64_t> pivot(m, 0);
    pivot[r] = moduli_[r];
    for (auto& col : cols) {
      std::int64_t x = 0, y = 0;
      std::int64_t a = pivot[r], b = col[r];
      if (b == 0) continue;
      g = ext_gcd(a, b, x, y);
      std::int64_t ua = a / g, ub = b / g;
      std::vector<std::int64_t> np(m), nc(m);
      for (std::size_t i = 0; i < m; ++i) {
        auto p_i = static_cast<__int128>(pivot[i]), c_i = static_cast<__int128>(col[i]);
        np[i] = static_cast<std::int64_t>(floor_mod(static_cast<std::int64_t>((x * p_i + y * c_i) % moduli_[i]), moduli_[i]));
        nc[i] = static_cast<std::int64_t>(floor_mod(static_cast<std::int64_t>((ub * p_i - ua * c_i) % moduli_[i]), moduli_[i]));
      }
      np[r] = g;
      nc[r] = 0;
      pivot = np;
      col = nc;
    }
    if (std::gcd(pivot[r], moduli_[r]) != 1) return false;
  }
  return true;
}

bool AbelianGroup::spans(const std::vector<GroupElement>& elements) const {
  std::vector<Code> codes;
  codes.reserve(elements.size());
  for (const auto& e : elements) codes.push_back(encode(e));
  return spans(codes);
}

std::string AbelianGroup::format(Code code) const {
  auto e = decode(code);
  std::string out;
  for (std::size_t i = 0; i < e.residues.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(e.residues[i]);
  }
  return out;
}

Code AbelianGroup::parse(const std::string& text) const {
  std::vector<std::int64_t> residues;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      residues.push_back(std::stoll(part));
    } catch (const std::exception&) {
      throw Error("cannot parse group element '" + text + "'");
    }
  }
  return encode_residues(residues);
}

SymbolKey make_key(std::span<const Code> entries) {
  if (entries.size() > kMaxArity) throw Error("symbol arity exceeds " + std::to_string(kMaxArity));
  SymbolKey key;
  key.arity = static_cast<std::uint8_t>(entries.size());
  std::copy(entries.begin(), entries.end(), key.entries.begin());
  std::sort(key.entries.begin(), key.entries.begin() + key.arity);
  return key;
}

SymbolKey minus_representative(const AbelianGroup& group, std::span<const Code> tuple,
                               int* sign) {
  SymbolKey key;
  key.arity = static_cast<std::uint8_t>(tuple.size());
  int s = 1;
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    Code a = tuple[i], b = group.neg(a);
    if (b < a) {
      key.entries[i] = b;
      s = -s;
    } else {
      key.entries[i] = a;
    }
  }
  std::sort(key.entries.begin(), key.entries.begin() + key.arity);
  if (sign) *sign = s;
  return key;
}

bool is_self_negating(const AbelianGroup& group, const SymbolKey& key) {
  for (Code c : key.view())
    if (group.is_two_torsion(c)) return true;
  return false;
}

Canonical canonicalize(const AbelianGroup& group, std::span<const Code> tuple, Flavor flavor) {
  if (tuple.empty() || tuple.size() > kMaxArity) throw Error("canonicalize: bad arity");
  if (!group.spans(tuple)) throw Error("canonicalize: entries do not generate the group");
  Canonical out;
  out.symbol.flavor = flavor;
  if (flavor != Flavor::Mminus) {
    out.symbol.key = make_key(tuple);
    out.coefficient = 1;
    return out;
  }
  int sign = 1;
  out.symbol.key = minus_representative(group, tuple, &sign);
  out.coefficient = is_self_negating(group, out.symbol.key) ? 0 : sign;
  return out;
}

Canonical canonicalize(const AbelianGroup& group, const std::vector<GroupElement>& tuple,
                       Flavor flavor) {
  std::vector<Code> codes;
  for (const auto& e : tuple) codes.push_back(group.encode(e));
  return canonicalize(group, codes, flavor);
}

SymbolIndex::SymbolIndex(AbelianGroup group, int arity, Flavor flavor,
                         std::vector<SymbolKey> symbols, std::size_t dropped_self_negating,
                         bool keeps_self_negating)
    : group_(std::move(group)),
      arity_(arity),
      flavor_(flavor),
      symbols_(std::move(symbols)),
      dropped_self_negating_(dropped_self_negating),
      keeps_self_negating_(keeps_self_negating) {
  lookup_.reserve(symbols_.size() * 2);
  for (std::size_t i = 0; i < symbols_.size(); ++i)
    lookup_.emplace(symbols_[i], static_cast<std::uint32_t>(i));
}

std::optional<std::uint32_t> SymbolIndex::find(const SymbolKey& key) const {
  auto it = lookup_.find(key);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

SymbolIndex::Term SymbolIndex::locate(std::span<const Code> tuple) const {
  SymbolKey key;
  int coefficient = 1;
  if (flavor_ == Flavor::Mminus) {
    key = minus_representative(group_, tuple, &coefficient);
    if (!keeps_self_negating_ && is_self_negating(group_, key)) return {0, 0};
  } else {
    key = make_key(tuple);
  }
  auto col = find(key);
  if (!col) throw Error("symbol " + format_symbol(group_, key) + " is not in the index");
  return {*col, coefficient};
}

void for_each_multiset(std::int64_t universe, int arity,
                       const std::function<void(std::span<const Code>)>& visit) {
  if (arity < 1 || arity > kMaxArity) throw Error("arity out of range");
  if (universe < 1) return;
  std::array<Code, kMaxArity> t{};
  const auto top = static_cast<Code>(universe - 1);
  while (true) {
    visit(std::span<const Code>(t.data(), static_cast<std::size_t>(arity)));
    int i = arity - 1;
    while (i >= 0 && t[i] == top) --i;
    if (i < 0) break;
    Code v = t[i] + 1;
    for (int j = i; j < arity; ++j) t[j] = v;
  }
}

SymbolIndex enumerate_symbols(const AbelianGroup& group, int arity, Flavor flavor,
                              const EnumerationOptions& options) {
  if (arity < 1) throw Error("enumerate_symbols: n must be >= 1");
  std::vector<SymbolKey> out;
  std::size_t dropped = 0;
  const bool minus = flavor == Flavor::Mminus;
  for_each_multiset(group.order(), arity, [&](std::span<const Code> t) {
    if (minus) {
      // orbit representatives are exactly the tuples with a <= -a entrywise
      for (Code c : t)
        if (group.neg(c) < c) return;
    }
    if (!group.spans(t)) return;
    SymbolKey key = make_key(t);
    if (minus && !options.keep_self_negating && is_self_negating(group, key)) {
      ++dropped;
      return;
    }
    out.push_back(key);
  });
  return SymbolIndex(group, arity, flavor, std::move(out), dropped,
                     minus && options.keep_self_negating);
}

std::string format_symbol(const AbelianGroup& group, const SymbolKey& key) {
  std::string out;
  for (int i = 0; i < key.arity; ++i) {
    if (i) out += ';';
    out += group.format(key.entries[i]);
  }
  return out;
}

std::vector<Code> parse_tuple(const AbelianGroup& group, const std::string& text) {
  std::vector<Code> out;
  std::string trimmed;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) trimmed += ch;
  if (trimmed.find(';') == std::string::npos && group.factor_count() == 1) {
    // cyclic shorthand: comma-separated integers
    std::stringstream ss(trimmed);
    std::string part;
    while (std::getline(ss, part, ',')) out.push_back(group.parse(part));
    return out;
  }
  std::stringstream ss(trimmed);
  std::string part;
  while (std::getline(ss, part, ';')) out.push_back(group.parse(part));
  return out;
}

void write_symbols(std::ostream& out, const SymbolIndex& index) {
  for (const auto& key : index.symbols()) out << format_symbol(index.group(), key) << '\n';
}

std::vector<SymbolKey> read_symbols(std::istream& in, const AbelianGroup& group) {
  std::vector<SymbolKey> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<Code> entries;
    std::stringstream ss(line);
    std::string part;
    while (std::getline(ss, part, ';')) entries.push_back(group.parse(part));
    out.push_back(make_key(entries));
  }
  return out;
}

}  // namespace birsym
