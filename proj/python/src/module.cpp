#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "birsym/birat.hpp"
#include "birsym/exactla.hpp"
#include "birsym/hecke.hpp"
#include "birsym/modsym.hpp"
#include "birsym/relations.hpp"
#include "birsym/structure.hpp"

namespace py = pybind11;
using namespace birsym;

namespace {

using Moduli = std::vector<std::int64_t>;

AbelianGroup group_of(const Moduli& moduli) { return AbelianGroup(moduli); }

std::vector<int> kset_or_full(int n, const std::optional<std::vector<int>>& k) {
  return k ? *k : full_kset(n);
}

std::vector<std::uint32_t> default_primes(const AbelianGroup& g, std::optional<std::vector<std::uint32_t>> primes) {
  return primes ? *primes : pick_primes(3, 1, static_cast<std::uint64_t>(g.order()));
}

py::object to_py(const mpz_class& x) {
  return py::module_::import("builtins").attr("int")(py::str(x.get_str()));
}

std::vector<std::vector<std::int64_t>> decode_all(const AbelianGroup& g, const SymbolKey& key) {
  std::vector<std::vector<std::int64_t>> out;
  for (Code c : key.view()) out.push_back(g.decode(c).residues);
  return out;
}

std::vector<Code> encode_all(const AbelianGroup& g, const std::vector<std::vector<std::int64_t>>& t) {
  std::vector<Code> out;
  for (const auto& e : t) out.push_back(g.encode(GroupElement{e}));
  return out;
}

py::dict dimension(const Moduli& moduli, int n, const std::string& flavor, std::optional<std::vector<int>> k,
                   const std::string& field, std::optional<std::vector<std::uint32_t>> primes) {
  const auto g = group_of(moduli);
  const auto s = build_relations(g, n, parse_flavor(flavor), kset_or_full(n, k));
  py::dict out;
  out["symbols"] = s.symbols();
  out["relations"] = s.relations();
  if (field == "Q") {
    const auto r = rank_q(s.matrix(), default_primes(g, primes));
    out["dim"] = s.symbols() - r.rank;
    out["agree"] = r.agree;
    py::list per;
    for (const auto& pr : r.per_prime) per.append(py::make_tuple(pr.prime, pr.rank));
    out["per_prime"] = per;
  } else {
    if (!primes || primes->size() != 1) throw Error("field Fp needs exactly one prime");
    out["dim"] = s.symbols() - rank_mod_p(s.matrix(), primes->front());
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Symbol groups B_n(G), M_n(G) and their structure maps";
  py::register_exception<Error>(m, "BirsymError", PyExc_ValueError);

  m.def(
      "canonicalize",
      [](const Moduli& moduli, const std::vector<std::vector<std::int64_t>>& tuple, const std::string& flavor) {
        const auto g = group_of(moduli);
        const auto c = canonicalize(g, encode_all(g, tuple), parse_flavor(flavor));
        return py::make_tuple(decode_all(g, c.symbol.key), c.coefficient);
      },
      py::arg("moduli"), py::arg("entries"), py::arg("flavor") = "M");

  m.def(
      "symbols",
      [](const Moduli& moduli, int n, const std::string& flavor) {
        const auto g = group_of(moduli);
        const auto index = enumerate_symbols(g, n, parse_flavor(flavor));
        std::vector<std::vector<std::vector<std::int64_t>>> out;
        for (const auto& key : index.symbols()) out.push_back(decode_all(g, key));
        return out;
      },
      py::arg("moduli"), py::arg("n"), py::arg("flavor") = "M");

  m.def(
      "relation_matrix",
      [](const Moduli& moduli, int n, const std::string& flavor, std::optional<std::vector<int>> k) {
        const auto s = build_relations(group_of(moduli), n, parse_flavor(flavor), kset_or_full(n, k));
        std::vector<std::tuple<std::size_t, std::uint32_t, std::int64_t>> triplets;
        for (std::size_t r = 0; r < s.relations(); ++r)
          for (const auto& e : s.matrix().row(r)) triplets.emplace_back(r, e.col, e.value);
        return py::make_tuple(s.relations(), s.symbols(), triplets);
      },
      py::arg("moduli"), py::arg("n"), py::arg("flavor") = "M", py::arg("k") = py::none(),
      "Relation matrix as (rows, cols, [(row, col, value), ...]).");

  m.def("dimension", &dimension, py::arg("moduli"), py::arg("n"), py::arg("flavor") = "B",
        py::arg("k") = py::none(), py::arg("field") = "Q", py::arg("primes") = py::none(),
        "dim over Q (consensus over primes) or over F_p (field='Fp', one prime).");

  m.def(
      "torsion",
      [](const Moduli& moduli, int n, const std::string& flavor) {
        const auto s = build_relations(group_of(moduli), n, parse_flavor(flavor), full_kset(n));
        const IntegerQuotient q(s.matrix());
        py::list divisors;
        for (const auto& d : q.torsion()) divisors.append(to_py(d));
        return py::make_tuple(q.free_rank(), divisors);
      },
      py::arg("moduli"), py::arg("n"), py::arg("flavor") = "B", "(free rank, invariant factors > 1)");

  m.def(
      "element_order",
      [](const Moduli& moduli, int n, const std::string& flavor,
         const std::vector<std::vector<std::int64_t>>& entries) -> py::object {
        const auto g = group_of(moduli);
        const auto s = build_relations(g, n, parse_flavor(flavor), full_kset(n));
        const auto t = s.index().locate(encode_all(g, entries));
        if (t.coefficient == 0) return py::int_(1);
        SymbolVector v;
        v.add(t.column, t.coefficient);
        const auto o = element_order(s.matrix(), v.to_row());
        if (!o) return py::none();
        return to_py(*o);
      },
      py::arg("moduli"), py::arg("n"), py::arg("flavor"), py::arg("entries"),
      "Order of one symbol in the group; None when it has infinite order.");

  m.def(
      "hecke_charpoly",
      [](std::int64_t N, int n, int ell, int r, const std::string& flavor, std::uint32_t p) {
        const auto s = build_relations(AbelianGroup::cyclic(N), n, parse_flavor(flavor), full_kset(n));
        const auto t = induced_on_quotient(hecke_matrix(s.index(), ell, r), s.matrix(), p);
        return charpoly_mod_p(t, p);
      },
      py::arg("N"), py::arg("n"), py::arg("ell"), py::arg("r") = 1, py::arg("flavor") = "M", py::arg("p") = 1000003,
      "Characteristic polynomial mod p of T_{ell,r} on the quotient, lowest degree first.");

  m.def(
      "mu_cokernel",
      [](const Moduli& moduli, int n) {
        py::list out;
        for (const auto& d : mu_cokernel(group_of(moduli), n)) out.append(to_py(d));
        return out;
      },
      py::arg("moduli"), py::arg("n"));

  m.def(
      "primitive_dim",
      [](std::int64_t N, int n, const std::string& variant, bool coprimitive) {
        const auto primes = pick_primes(3, 1, static_cast<std::uint64_t>(N));
        return coprimitive ? coprimitive_dim(N, n, primes).dim : primitive_dim(N, n, parse_flavor(variant), primes).dim;
      },
      py::arg("N"), py::arg("n"), py::arg("variant") = "Mminus", py::arg("coprimitive") = false);

  m.def(
      "modsym",
      [](std::int64_t N) {
        const auto r = modsym_dimensions(N, pick_primes(3, 1, static_cast<std::uint64_t>(N)));
        py::dict out;
        out["N"] = r.N;
        out["dim"] = r.dim;
        out["dim_minus"] = r.dim_minus;
        out["C"] = r.cusps.C;
        out["C2"] = r.cusps.C2;
        out["genus"] = r.genus ? py::object(py::int_(*r.genus)) : py::object(py::none());
        return out;
      },
      py::arg("N"));

  m.def(
      "certify_blowup",
      [](std::int64_t N, const std::vector<std::vector<std::int64_t>>& components, const std::string& kind,
         std::vector<int> dims, std::vector<std::int64_t> b, std::vector<std::int64_t> a, std::vector<int> kappa,
         const std::string& span) {
        const auto g = AbelianGroup::cyclic(N);
        if (dims.size() != 4) throw Error("dims must be (d1, d2, d3, d4)");
        BlowupSpec spec;
        spec.kind = kind == "I" ? BlowupCase::I : kind == "II" ? BlowupCase::II : BlowupCase::III;
        if (kind != "I" && kind != "II" && kind != "III") throw Error("case must be I, II or III");
        spec.d1 = dims[0];
        spec.d2 = dims[1];
        spec.d3 = dims[2];
        spec.d4 = dims[3];
        for (auto x : b) spec.b.push_back(g.encode(GroupElement{{x}}));
        for (auto x : a) spec.a.push_back(g.encode(GroupElement{{x}}));
        spec.kappa = kappa;
        FixedLocusData data;
        data.group = g;
        data.n = spec.n();
        for (const auto& c : components) {
          std::vector<Code> t;
          for (auto x : c) t.push_back(g.encode(GroupElement{{x}}));
          data.components.push_back({"", t});
        }
        const auto relations = build_relations(g, data.n, Flavor::B, full_kset(data.n));
        return certify_invariance(data, spec, relations, span == "Z" ? SpanField::Z : SpanField::Q);
      },
      py::arg("N"), py::arg("components"), py::arg("kind"), py::arg("dims"), py::arg("b"), py::arg("a"),
      py::arg("kappa"), py::arg("span") = "Q",
      "True iff beta of the fixed-locus data is unchanged by the blowup.");
}
