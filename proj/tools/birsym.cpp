// birsym: command-line front end for the symbol-group calculator.
//
// Every command prints a JSON report (or CSV with --format csv). The exit
// code is 0 when all certifications pass, 1 when one fails and 2 on errors.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "birsym/algebra.hpp"
#include "birsym/birat.hpp"
#include "birsym/exactla.hpp"
#include "birsym/hecke.hpp"
#include "birsym/modsym.hpp"
#include "birsym/relations.hpp"
#include "birsym/structure.hpp"

using json = nlohmann::json;
using namespace birsym;

namespace {

constexpr int kExitFailed = 1;
constexpr int kExitError = 2;

std::vector<std::int64_t> parse_moduli(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, 'x')) {
    std::size_t used = 0;
    const long long v = std::stoll(part, &used);
    if (used != part.size() || v < 1) throw Error("bad group modulus '" + part + "'");
    out.push_back(v);
  }
  if (out.empty()) throw Error("empty group");
  return out;
}

std::string moduli_text(const std::vector<std::int64_t>& moduli) {
  std::string s;
  for (std::size_t i = 0; i < moduli.size(); ++i) s += (i ? "x" : "") + std::to_string(moduli[i]);
  return s;
}

std::vector<int> parse_ints(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ','))
    if (!part.empty()) out.push_back(std::stoi(part));
  return out;
}

struct JobConfig {
  std::string group = "5";
  int n = 2;
  std::string flavor = "M";
  std::string kset;  // empty = all k
  std::string field = "Q";
  std::uint32_t p = 0;
  std::string primes;  // explicit list for Q
  std::size_t prime_count = 3;
  std::size_t threads = 1;
  std::size_t budget = 0;  // max relation rows, 0 = unlimited
  std::size_t snf_budget = std::size_t{1} << 24;
  std::uint64_t seed = 1;
  std::string format = "json";
  std::string output;

  AbelianGroup abelian() const { return AbelianGroup(parse_moduli(group)); }
  Flavor kind() const { return parse_flavor(flavor); }
  std::vector<int> ks() const { return kset.empty() ? full_kset(n) : parse_ints(kset); }
  bool over_q() const { return field == "Q"; }

  // Primes for Q, or the single characteristic of a finite field.
  std::vector<std::uint32_t> field_primes() const {
    if (field == "Q") {
      if (!primes.empty()) {
        std::vector<std::uint32_t> out;
        for (int v : parse_ints(primes)) out.push_back(static_cast<std::uint32_t>(v));
        for (auto q : out)
          if (!is_prime(q)) throw Error("--primes: " + std::to_string(q) + " is not prime");
        return out;
      }
      return pick_primes(prime_count, seed, abelian().order());
    }
    if (field == "F2") return {2};
    std::uint32_t q = p;
    if (field != "Fp") q = static_cast<std::uint32_t>(std::stoul(field.substr(1)));
    if (field[0] != 'F' || !is_prime(q)) throw Error("--field must be Q, F2, Fp (with --p) or F<prime>");
    return {q};
  }

  json to_json() const {
    return {{"group", moduli_text(abelian().moduli())}, {"n", n},          {"flavor", flavor},
            {"k", ks()},                                {"field", field},  {"threads", threads},
            {"budget", budget},                         {"seed", seed}};
  }
};

void add_field_options(CLI::App* app, JobConfig& cfg) {
  app->add_option("--field", cfg.field, "Q, F2, Fp (with --p) or F<prime>");
  app->add_option("--p", cfg.p, "characteristic for --field Fp");
  app->add_option("--primes", cfg.primes, "comma-separated primes used for Q");
  app->add_option("--prime-count", cfg.prime_count, "number of random primes for Q");
  app->add_option("--seed", cfg.seed, "seed for the prime generator");
  app->add_option("--threads", cfg.threads, "worker threads (primes run concurrently)");
  app->add_option("--budget", cfg.budget, "maximum number of relation rows (0 = unlimited)");
  app->add_option("--snf-budget", cfg.snf_budget, "maximum cells of the dense integer core");
  app->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app->add_option("--output", cfg.output, "write the report to a file");
}

void add_system_options(CLI::App* app, JobConfig& cfg) {
  app->add_option("--group", cfg.group, "moduli of the group, e.g. 37 or 2x2");
  app->add_option("--n", cfg.n, "number of characters in a symbol");
  app->add_option("--flavor", cfg.flavor, "B, M, Mstar or Mminus");
  app->add_option("--k", cfg.kset, "comma-separated block sizes (default: all)");
  add_field_options(app, cfg);
}

// Relation matrix with an optional on-disk cache keyed by the job.
struct Presentation {
  SymbolIndex index;
  SparseMatrix matrix;
  bool cached = false;
};

Presentation present(const JobConfig& cfg, bool keep_self_negating) {
  const auto group = cfg.abelian();
  const auto flavor = cfg.kind();
  Presentation out;
  EnumerationOptions eo;
  eo.keep_self_negating = keep_self_negating;
  out.index = enumerate_symbols(group, cfg.n, flavor, eo);
  std::string cache_path;
  if (const char* dir = std::getenv("BIRSYM_CACHE_DIR"); dir && *dir) {
    std::string k;
    for (int v : cfg.ks()) k += std::to_string(v);
    cache_path = std::string(dir) + "/" + moduli_text(group.moduli()) + "_n" + std::to_string(cfg.n) + "_" +
                 to_string(flavor) + "_k" + k + (keep_self_negating ? "_keep" : "") + ".sms";
    if (std::filesystem::exists(cache_path)) {
      out.matrix = read_sms_file(cache_path);
      if (out.matrix.cols() != out.index.size()) throw Error("cache file " + cache_path + " does not match");
      out.cached = true;
    }
  }
  if (!out.cached) {
    BuildOptions bo;
    bo.keep_self_negating = keep_self_negating;
    out.matrix = build_relations(out.index, cfg.ks(), bo).matrix();
    if (!cache_path.empty()) {
      std::filesystem::create_directories(std::filesystem::path(cache_path).parent_path());
      write_sms_file(cache_path, out.matrix);
    }
  }
  if (cfg.budget && out.matrix.rows() > cfg.budget)
    throw Error("relation system has " + std::to_string(out.matrix.rows()) + " rows, above --budget");
  return out;
}

struct Report {
  std::string command;
  json config;
  json result;
  std::vector<std::uint32_t> primes;
  bool certified = true;
  std::vector<std::string> csv;  // lines, header first
};

int emit(const JobConfig& cfg, Report report, double seconds) {
  std::ostringstream text;
  if (cfg.format == "csv") {
    for (const auto& line : report.csv) text << line << '\n';
  } else {
    json j = {{"command", report.command}, {"config", report.config},       {"result", report.result},
              {"primes", report.primes},   {"certified", report.certified}, {"timing", {{"seconds", seconds}}}};
    text << j.dump(2) << '\n';
  }
  if (cfg.output.empty()) {
    std::cout << text.str();
  } else {
    std::ofstream out(cfg.output);
    if (!out) throw Error("cannot write " + cfg.output);
    out << text.str();
  }
  return report.certified ? 0 : kExitFailed;
}

json rank_json(const RankReport& r) {
  json per = json::array();
  for (const auto& pr : r.per_prime) per.push_back({{"prime", pr.prime}, {"rank", pr.rank}});
  return per;
}

// dim = #symbols - rank over the requested field.
struct DimResult {
  std::size_t symbols = 0, relations = 0, rank = 0, dim = 0;
  RankReport ranks;
};

DimResult dimension(const JobConfig& cfg, const std::vector<std::uint32_t>& primes) {
  const bool f2 = !cfg.over_q() && primes.front() == 2;
  const auto pres = present(cfg, f2 && cfg.kind() == Flavor::Mminus);
  DimResult d;
  d.symbols = pres.index.size();
  d.relations = pres.matrix.rows();
  d.ranks = rank_q(pres.matrix, primes, {}, cfg.threads);
  d.rank = d.ranks.rank;
  d.dim = d.symbols - d.rank;
  return d;
}

Report cmd_dim(const JobConfig& cfg, const std::string& name) {
  Report r{name, cfg.to_json(), {}, cfg.field_primes(), true, {}};
  const auto d = dimension(cfg, r.primes);
  r.result = {{"symbols", d.symbols}, {"relations", d.relations}, {"rank", d.rank},
              {"dim", d.dim},         {"per_prime", rank_json(d.ranks)}, {"primes_agree", d.ranks.agree}};
  r.certified = d.ranks.agree;
  std::string k;
  for (int v : cfg.ks()) k += (k.empty() ? "" : ";") + std::to_string(v);
  r.csv = {"group,n,flavor,k,field,symbols,rank,dim",
           moduli_text(cfg.abelian().moduli()) + "," + std::to_string(cfg.n) + "," + cfg.flavor + "," + k + "," +
               cfg.field + "," + std::to_string(d.symbols) + "," + std::to_string(d.rank) + "," +
               std::to_string(d.dim)};
  return r;
}

Report cmd_table(JobConfig cfg, std::int64_t from, std::int64_t to) {
  Report r{"table", cfg.to_json(), json::array(), {}, true, {"N,dim"}};
  r.config["from"] = from;
  r.config["to"] = to;
  for (std::int64_t N = from; N <= to; ++N) {
    cfg.group = std::to_string(N);
    const auto primes = cfg.field_primes();
    const auto d = dimension(cfg, primes);
    r.result.push_back({{"N", N}, {"dim", d.dim}, {"symbols", d.symbols}, {"primes_agree", d.ranks.agree}});
    r.csv.push_back(std::to_string(N) + "," + std::to_string(d.dim));
    r.certified = r.certified && d.ranks.agree;
    for (auto p : primes)
      if (std::find(r.primes.begin(), r.primes.end(), p) == r.primes.end()) r.primes.push_back(p);
  }
  return r;
}

std::string mpz_text(const mpz_class& x) { return x.get_str(); }

Report cmd_order(const JobConfig& cfg, const std::string& element) {
  Report r{"order", cfg.to_json(), {}, {}, true, {}};
  r.config["element"] = element;
  const auto pres = present(cfg, false);
  const auto tuple = parse_tuple(pres.index.group(), element);
  if (static_cast<int>(tuple.size()) != cfg.n) throw Error("--element must have n entries");
  const auto v = combination(pres.index, {{tuple, 1}});
  const auto order = element_order(pres.matrix, v.to_row(), cfg.snf_budget);
  const std::string text = order ? mpz_text(*order) : "infinite";
  r.result = {{"element", element}, {"order", text}};
  r.csv = {"element,order", "\"" + element + "\"," + text};
  return r;
}

Report cmd_torsion(const JobConfig& cfg) {
  Report r{"torsion", cfg.to_json(), {}, {}, true, {}};
  const auto pres = present(cfg, false);
  const IntegerQuotient q(pres.matrix, std::nullopt, cfg.snf_budget);
  json divisors = json::array();
  std::string joined;
  for (const auto& d : q.torsion()) {
    divisors.push_back(mpz_text(d));
    joined += (joined.empty() ? "" : ";") + mpz_text(d);
  }
  r.result = {{"free_rank", q.free_rank()}, {"torsion", divisors}, {"core_rows", q.core_rows()},
              {"core_cols", q.core_cols()}};
  r.csv = {"free_rank,torsion", std::to_string(q.free_rank()) + "," + joined};
  return r;
}

json charpoly_json(const std::vector<std::uint32_t>& c) { return json(c); }

Report cmd_hecke(const JobConfig& cfg, int ell, int rank, int commute_with) {
  Report r{"hecke", cfg.to_json(), {}, {}, true, {}};
  r.config["ell"] = ell;
  r.config["r"] = rank;
  std::uint32_t p = cfg.over_q() ? pick_primes(1, cfg.seed, cfg.abelian().order()).front() : cfg.field_primes().front();
  r.primes = {p};
  const auto pres = present(cfg, false);
  EliminationOptions o;
  o.keep_pivots = true;
  const ModpEchelon ech(pres.matrix, p, o);
  json result = {{"quotient_dim", ech.free_cols().size()}};
  DenseModMatrix t;
  try {
    t = induced_on_quotient(hecke_matrix(pres.index, ell, rank), pres.matrix, ech);
    result["relations_preserved"] = true;
    result["charpoly_mod_p"] = charpoly_json(charpoly_mod_p(t, p));
    result["matrix_mod_p"] = t;
  } catch (const Error& e) {
    result["relations_preserved"] = false;
    result["reason"] = e.what();
    r.certified = false;
  }
  if (commute_with > 0 && r.certified) {
    const auto u = induced_on_quotient(hecke_matrix(pres.index, commute_with, rank), pres.matrix, ech);
    const bool commute = multiply_mod_p(t, u, p) == multiply_mod_p(u, t, p);
    result["commutes_with"] = {{"ell", commute_with}, {"commute", commute}};
    r.certified = commute;
  }
  r.result = result;
  r.csv = {"quotient_dim,relations_preserved", std::to_string(ech.free_cols().size()) + "," +
                                                   (result["relations_preserved"].get<bool>() ? "1" : "0")};
  return r;
}

Report cmd_mu(const JobConfig& cfg) {
  Report r{"mu", cfg.to_json(), {}, cfg.field_primes(), true, {}};
  if (!cfg.over_q()) throw Error("mu: use --field Q");
  const auto group = cfg.abelian();
  const auto m = verify_mu(group, cfg.n, r.primes);
  json coker = json::array();
  std::string joined;
  for (const auto& d : mu_cokernel(group, cfg.n)) {
    coker.push_back(mpz_text(d));
    joined += (joined.empty() ? "" : ";") + mpz_text(d);
  }
  r.result = {{"b_symbols", m.b_symbols},       {"m_symbols", m.m_symbols},
              {"rows_checked", m.rows_checked}, {"rows_outside_q", m.rows_outside_q},
              {"rows_outside_z", m.rows_outside_z}, {"dim_b", m.dim_b},
              {"dim_m", m.dim_m},               {"cokernel_2_torsion", m.surjective_mod_2},
              {"cokernel", coker}};
  r.certified = m.rows_outside_q == 0 && m.rows_outside_z == 0;
  r.csv = {"rows_outside_z,cokernel", std::to_string(m.rows_outside_z) + "," + joined};
  return r;
}

Report cmd_primitive(const JobConfig& cfg, const std::string& variant, bool coprimitive) {
  Report r{"primitive", cfg.to_json(), {}, cfg.field_primes(), true, {}};
  const auto group = cfg.abelian();
  if (!group.is_cyclic()) throw Error("primitive: the group must be cyclic");
  const std::int64_t N = group.cyclic_order();
  const auto report = coprimitive ? coprimitive_dim(N, cfg.n, r.primes)
                                  : primitive_dim(N, cfg.n, parse_flavor(variant), r.primes);
  r.config["variant"] = coprimitive ? "coprimitive" : variant;
  r.result = {{"dim", report.dim}, {"per_prime", report.per_prime}};
  r.csv = {"N,n,variant,dim,primes", report.csv()};
  return r;
}

Report cmd_modsym(const JobConfig& cfg, std::int64_t from, std::int64_t to, bool compare) {
  Report r{"modsym", {{"from", from}, {"to", to}, {"compare", compare}}, json::array(), {}, true,
           {ModsymReport::csv_header()}};
  r.primes = cfg.field_primes();
  for (std::int64_t N = from; N <= to; ++N) {
    const auto m = modsym_dimensions(N, r.primes);
    json row = {{"N", N},         {"dim", m.dim},     {"dim_minus", m.dim_minus},
                {"C", m.cusps.C}, {"C2", m.cusps.C2}, {"minus_formula", m.minus_formula_holds()}};
    row["g"] = m.genus ? json(*m.genus) : json(nullptr);
    bool ok = m.minus_formula_holds();
    if (compare) {
      const auto c = compare_with_symbol_group(N, r.primes);
      row["symbol_group_dim"] = c.dim_symbol_group;
      row["rows_outside"] = c.rows_outside;
      ok = ok && c.ok();
    }
    r.certified = r.certified && ok;
    r.result.push_back(row);
    r.csv.push_back(m.csv());
  }
  return r;
}

struct BlowupArgs {
  std::string kind;
  std::string dims;
  std::string b, a, kappa;
};

BlowupSpec parse_blowup(const BlowupArgs& args, const AbelianGroup& group) {
  BlowupSpec s;
  if (args.kind == "I")
    s.kind = BlowupCase::I;
  else if (args.kind == "II")
    s.kind = BlowupCase::II;
  else if (args.kind == "III")
    s.kind = BlowupCase::III;
  else
    throw Error("--case must be I, II or III");
  const auto d = parse_ints(args.dims);
  if (d.size() != 4) throw Error("--dims needs d1,d2,d3,d4");
  s.d1 = d[0], s.d2 = d[1], s.d3 = d[2], s.d4 = d[3];
  if (!args.b.empty()) s.b = parse_tuple(group, args.b);
  if (!args.a.empty()) s.a = parse_tuple(group, args.a);
  s.kappa = parse_ints(args.kappa);
  s.validate(group);
  return s;
}

json vector_json(const SymbolIndex& index, const SymbolVector& v) {
  json out = json::array();
  for (const auto& [c, x] : v.coefficients)
    out.push_back({{"symbol", format_symbol(index.group(), index.at(c))}, {"coefficient", x}});
  return out;
}

Report cmd_beta(JobConfig cfg, const std::string& locus, const BlowupArgs& blowup, const std::string& span) {
  Report r{"beta", cfg.to_json(), {}, {}, true, {"symbol,coefficient"}};
  const auto group = cfg.abelian();
  std::ifstream in(locus);
  if (!in) throw Error("cannot read " + locus);
  const auto data = read_fixed_locus(in, group);
  if (data.n) cfg.n = data.n;
  cfg.flavor = "B";
  r.config = cfg.to_json();
  r.config["locus"] = locus;
  const auto index = enumerate_symbols(group, cfg.n, Flavor::B);
  const auto beta = beta_class(index, data);
  r.result["beta"] = vector_json(index, beta);
  for (const auto& [c, x] : beta.coefficients)
    r.csv.push_back("\"" + format_symbol(group, index.at(c)) + "\"," + std::to_string(x));
  if (!blowup.kind.empty()) {
    const auto spec = parse_blowup(blowup, group);
    const auto relations = build_relations(index, full_kset(cfg.n));
    r.primes = cfg.field_primes();
    r.result["delta"] = vector_json(index, blowup_delta(index, spec));
    r.result["beta_after"] = vector_json(index, beta_class(index, apply_blowup(data, spec)));
    const bool ok = certify_invariance(data, spec, relations, span == "Z" ? SpanField::Z : SpanField::Q, r.primes);
    r.result["invariant"] = ok;
    r.result["span"] = span;
    r.certified = ok;
  }
  return r;
}

Report cmd_export(const JobConfig& cfg, const std::string& path, const std::string& symbols_path) {
  Report r{"export-sms", cfg.to_json(), {}, {}, true, {}};
  if (path.empty()) throw Error("export-sms needs --sms PATH");
  const auto group = cfg.abelian();
  const bool keep = cfg.field == "F2" && cfg.kind() == Flavor::Mminus;
  BuildOptions bo;
  bo.keep_self_negating = keep;
  EnumerationOptions eo;
  eo.keep_self_negating = keep;
  const auto index = enumerate_symbols(group, cfg.n, cfg.kind(), eo);
  const auto rows = export_relations_sms(group, cfg.n, cfg.kind(), cfg.ks(), path, bo);
  if (!symbols_path.empty()) {
    std::ofstream out(symbols_path);
    if (!out) throw Error("cannot write " + symbols_path);
    write_symbols(out, index);
  }
  r.result = {{"path", path}, {"rows", rows}, {"cols", index.size()}};
  if (!symbols_path.empty()) r.result["symbols_path"] = symbols_path;
  r.csv = {"rows,cols", std::to_string(rows) + "," + std::to_string(index.size())};
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact calculator for the symbol groups B_n(G), M_n(G) and their variants"};
  app.require_subcommand(1);
  JobConfig cfg;

  auto* dim = app.add_subcommand("dim", "dimension of a symbol group over a field");
  add_system_options(dim, cfg);

  auto* partial = app.add_subcommand("partial", "dimension of a partial system (relations with given k only)");
  add_system_options(partial, cfg);
  partial->get_option("--k")->required();

  std::int64_t from = 2, to = 10;
  auto* table = app.add_subcommand("table", "dimension table over cyclic groups Z/N, N in [from, to]");
  add_system_options(table, cfg);
  table->add_option("--from", from);
  table->add_option("--to", to);

  std::string element;
  auto* order = app.add_subcommand("order", "order of a symbol in the group");
  add_system_options(order, cfg);
  order->add_option("--element", element, "characters of the symbol, e.g. 0,0,1")->required();

  auto* torsion = app.add_subcommand("torsion", "free rank and torsion invariants");
  add_system_options(torsion, cfg);

  int ell = 2, hecke_r = 1, commute = 0;
  auto* hecke = app.add_subcommand("hecke", "Hecke operator on the quotient over F_p");
  add_system_options(hecke, cfg);
  hecke->add_option("--ell", ell);
  hecke->add_option("--r", hecke_r);
  hecke->add_option("--commute-with", commute, "also check commutation with T_{ell'}");

  auto* mu = app.add_subcommand("mu", "the map mu: B_n(G) -> M_n(G)");
  add_system_options(mu, cfg);

  std::string variant = "Mminus";
  bool coprimitive = false;
  auto* primitive = app.add_subcommand("primitive", "dimension of the primitive part (cyclic G)");
  add_system_options(primitive, cfg);
  primitive->add_option("--variant", variant, "Mminus or M")->check(CLI::IsMember({"Mminus", "M"}));
  primitive->add_flag("--coprimitive", coprimitive, "cokernel of multiplication instead");

  std::int64_t ms_from = 1, ms_to = 20;
  bool compare = false;
  auto* modsym = app.add_subcommand("modsym", "Manin symbol dimensions and cusp counts");
  add_field_options(modsym, cfg);
  modsym->add_option("--from", ms_from);
  modsym->add_option("--to", ms_to);
  modsym->add_flag("--compare", compare, "compare the minus space with M-_2(Z/N)");

  std::string locus, span = "Q";
  BlowupArgs blowup;
  auto* beta = app.add_subcommand("beta", "beta class of fixed-locus data, optionally across a blowup");
  add_system_options(beta, cfg);
  beta->add_option("--locus", locus, "fixed-locus file")->required();
  beta->add_option("--case", blowup.kind, "blowup case I, II or III");
  beta->add_option("--dims", blowup.dims, "d1,d2,d3,d4");
  beta->add_option("--b", blowup.b, "characters b_j");
  beta->add_option("--a", blowup.a, "distinct characters a^i");
  beta->add_option("--kappa", blowup.kappa, "multiplicities kappa_i");
  beta->add_option("--span", span, "Q or Z")->check(CLI::IsMember({"Q", "Z"}));

  std::string sms_path, symbols_path;
  auto* exp = app.add_subcommand("export-sms", "write the relation matrix in SMS format");
  add_system_options(exp, cfg);
  exp->add_option("--sms", sms_path, "output matrix file")->required();
  exp->add_option("--symbols", symbols_path, "also write the symbol list");

  CLI11_PARSE(app, argc, argv);

  const auto start = std::chrono::steady_clock::now();
  try {
    Report report;
    if (dim->parsed())
      report = cmd_dim(cfg, "dim");
    else if (partial->parsed())
      report = cmd_dim(cfg, "partial");
    else if (table->parsed())
      report = cmd_table(cfg, from, to);
    else if (order->parsed())
      report = cmd_order(cfg, element);
    else if (torsion->parsed())
      report = cmd_torsion(cfg);
    else if (hecke->parsed())
      report = cmd_hecke(cfg, ell, hecke_r, commute);
    else if (mu->parsed())
      report = cmd_mu(cfg);
    else if (primitive->parsed())
      report = cmd_primitive(cfg, variant, coprimitive);
    else if (modsym->parsed())
      report = cmd_modsym(cfg, ms_from, ms_to, compare);
    else if (beta->parsed())
      report = cmd_beta(cfg, locus, blowup, span);
    else
      report = cmd_export(cfg, sms_path, symbols_path);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return emit(cfg, std::move(report), seconds);
  } catch (const std::exception& e) {
    std::cerr << json({{"error", e.what()}}).dump() << '\n';
    return kExitError;
  }
}
