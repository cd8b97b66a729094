// ffenergy: exact additive energies, bilinear character sums and residue-class
// counts over F_q[X]/F(X).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "ffenergy/bilinear.hpp"
#include "ffenergy/energy.hpp"
#include "ffenergy/harness.hpp"
#include "ffenergy/residue_classes.hpp"

using namespace ffenergy;
using Record = nlohmann::ordered_json;

namespace {

struct Globals {
  std::string field;
  bool auto_modulus = false;
  std::uint64_t seed = 1;
  double budget = 0;
  std::string cache_dir;
  std::string out;
  std::string format = "json";
  unsigned workers = 1;
};

ResidueField open_field(const Globals& g) {
  if (g.field.empty()) throw CLI::ValidationError("--field", "a field is required, e.g. 3^1^5 with --auto-modulus");
  BuildOptions opt;
  opt.auto_modulus = g.auto_modulus;
  if (!g.cache_dir.empty()) opt.cache_dir = g.cache_dir;
  return ResidueField::build(g.field, opt);
}

std::string cell(const Record& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.is_null() ? "" : v.dump();
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

/// Prints rows of flat records as CSV (header from the first row) or as JSON.
void print(const Globals& g, const std::vector<Record>& rows) {
  std::ostringstream os;
  if (g.format == "csv") {
    if (!rows.empty()) {
      bool first = true;
      for (const auto& [k, v] : rows.front().items()) os << (std::exchange(first, false) ? "" : ",") << k;
      os << '\n';
    }
    for (const auto& r : rows) {
      bool first = true;
      for (const auto& [k, v] : r.items()) os << (std::exchange(first, false) ? "" : ",") << cell(v);
      os << '\n';
    }
  } else {
    os << (rows.size() == 1 ? rows.front() : Record(rows)).dump(2) << '\n';
  }
  if (g.out.empty()) {
    std::cout << os.str();
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + g.out);
  f << os.str();
}

Record complex_fields(Record r, std::complex<double> z) {
  r["value_re"] = z.real();
  r["value_im"] = z.imag();
  r["abs"] = std::abs(z);
  return r;
}

std::pair<Weight, Weight> weights(const std::string& spec, std::uint64_t seed, int m, int n, std::uint32_t q) {
  if (spec.empty() || spec == "seed") return {Weight::random(m, q, 2 * seed), Weight::random(n, q, 2 * seed + 1)};
  if (spec == "indicator") return {Weight::indicator(m, q), Weight::indicator(n, q)};
  if (spec.find_first_not_of("0123456789") == std::string::npos) {
    const auto s = std::stoull(spec);
    return {Weight::random(m, q, 2 * s), Weight::random(n, q, 2 * s + 1)};
  }
  const auto comma = spec.find(',');
  if (comma == std::string::npos) throw CLI::ValidationError("--weights", "expected seed, indicator or alpha_file,beta_file");
  return {Weight::load(spec.substr(0, comma), m, q), Weight::load(spec.substr(comma + 1), n, q)};
}

Elem parse_elem(const ResidueField& K, const std::string& text) {
  return K.from_poly(K.ring().rem(parse_poly(text, K.base()), K.modulus()));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact additive energies, bilinear sums and residue-class counts over F_q[X]/F(X)"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  if (const char* env = std::getenv("FFENERGY_CACHE_DIR")) g.cache_dir = env;
  app.add_option("--field", g.field, "p^e^r[:c0,...,cr], e.g. 3^1^3:1,2,0,1");
  app.add_flag("--auto-modulus", g.auto_modulus, "use the smallest monic irreducible of degree r");
  app.add_option("--seed", g.seed, "weight seed");
  app.add_option("--budget", g.budget, "term/enumeration budget (0 keeps the defaults)");
  app.add_option("--cache-dir", g.cache_dir, "log-table cache directory (env FFENERGY_CACHE_DIR)");
  app.add_option("--out", g.out, "output file (default stdout)");
  app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--workers", g.workers, "worker threads, 0 = all cores");

  int m = 1, n = 1, h = 1, k = 1;
  std::string weight_spec, twist = "1", a_text = "1", kind = "N", set = "irreducible", chi = "1", alpha = "1",
              level = "quick", config;
  bool oracle = false, squarefree = false, monic_only = false;
  int ceiling = 0;

  auto* esq = app.add_subcommand("energy-sqrt", "E^sqrt over the window m");
  esq->add_option("--m", m)->required();
  esq->add_option("--weights", weight_spec, "indicator (default), seed or a weight file");
  esq->add_flag("--oracle", oracle, "also run the brute-force quadruple count");
  auto* einv = app.add_subcommand("energy-inv", "E^inv over the window m");
  einv->add_option("--m", m)->required();

  auto* bsq = app.add_subcommand("bilinear-sqrt", "W^sqrt(alpha, beta)");
  auto* binv = app.add_subcommand("bilinear-inv", "W^inv(alpha, beta)");
  for (auto* sc : {bsq, binv}) {
    sc->add_option("--m", m)->required();
    sc->add_option("--n", n)->required();
    sc->add_option("--weights", weight_spec, "seed (default --seed), indicator, or alpha_file,beta_file");
    sc->add_option("--twist", twist, "twist c as coefficients c0,c1,...");
  }

  auto* cs = app.add_subcommand("charsum", "sum of a multiplicative character over P_n, S_n or M_n");
  cs->add_option("--set", set)->check(CLI::IsMember({"irreducible", "squarefree", "monic"}));
  cs->add_option("--n", n)->required();
  cs->add_option("--chi", chi, "character index or sample:k");

  auto* rc = app.add_subcommand("residue-count", "N_F, N_F^# or Q_F for a class a");
  rc->add_option("--kind", kind)->check(CLI::IsMember({"N", "Nsf", "Q"}));
  rc->add_option("--a", a_text, "class as coefficients c0,c1,...");
  rc->add_option("--n", n)->required();
  rc->set_help_flag("--help", "Print this help message and exit");
  rc->add_option("--h", h)->required();

  auto* ps = app.add_subcommand("psi", "Psi(k, m; F, a) or Psi^#");
  ps->add_option("--a", a_text, "class as coefficients c0,c1,...");
  ps->add_option("--k", k)->required();
  ps->add_option("--m", m)->required();
  ps->add_flag("--squarefree", squarefree);

  auto* sr = app.add_subcommand("smooth-rep", "M_alpha(F) with one witness per nonzero class");
  sr->add_option("--alpha", alpha, "rational, e.g. 1, 3/4 or 0.5");
  sr->add_flag("--monic-only", monic_only);
  sr->add_option("--ceiling", ceiling, "degree ceiling (default 4r)");

  auto* sw = app.add_subcommand("sweep", "run a JSON sweep spec");
  sw->add_option("config", config, "sweep spec file")->required()->check(CLI::ExistingFile);

  auto* st = app.add_subcommand("selftest", "exact-identity suite");
  st->add_option("--level", level)->check(CLI::IsMember({"quick", "full"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(sw)) {
      auto spec = SweepSpec::load(config);
      if (app.count("--workers")) spec.workers = g.workers;
      if (!g.cache_dir.empty() && !spec.cache_dir) spec.cache_dir = g.cache_dir;
      if (app.count("--seed")) spec.seed = g.seed;
      const auto report = run_sweep(spec);
      if (g.out.empty()) {
        if (g.format == "csv") write_csv(report, std::cout);
        else write_json(report, std::cout);
      } else {
        emit(report, g.format, g.out);
      }
      std::cerr << report.rows.size() << " rows, " << report.failures() << " failed, " << report.warnings()
                << " warnings, " << report.skipped() << " skipped\n";
      return report.exit_code();
    }
    if (app.got_subcommand(st)) {
      const auto rep = selftest(level, g.cache_dir.empty() ? std::nullopt : std::optional<std::filesystem::path>(g.cache_dir));
      for (const auto& c : rep.checks)
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << (c.detail.empty() ? "" : ": " + c.detail) << '\n';
      if (!rep.pass()) {
        std::cerr << "selftest failed: " << rep.first_failure() << '\n';
        return 1;
      }
      return 0;
    }

    const ResidueField K = open_field(g);
    Record base;
    base["field"] = K.spec_string();
    EnergyOptions eo;
    eo.workers = g.workers;
    BilinearOptions bo;
    bo.workers = g.workers;
    ClassOptions co;
    co.workers = g.workers;
    if (g.budget > 0) {
      eo.pair_limit = eo.oracle_limit = bo.term_limit = g.budget;
      co.enumeration_budget = static_cast<std::uint64_t>(g.budget);
    }

    if (app.got_subcommand(esq)) {
      Weight beta = weight_spec.empty() || weight_spec == "indicator" ? Weight::indicator(m, K.q())
                    : weight_spec == "seed" ? Weight::random(m, K.q(), g.seed)
                                            : Weight::load(weight_spec, m, K.q());
      const auto res = energy_sqrt(K, beta, eo);
      Record r = base;
      r["m"] = m;
      r["method"] = res.method;
      r["value"] = res.integral ? to_decimal(res.exact) : std::to_string(res.value.real());
      r["main_term"] = energy_sqrt_main_term(K.q(), K.degree(), m, beta.norm1(), beta.norm_inf());
      r["ratio"] = std::abs(res.value) / r["main_term"].get<double>();
      if (oracle) {
        const BigInt bf = energy_sqrt_bruteforce(K, m, eo);
        r["oracle"] = to_decimal(bf);
        r["oracle_match"] = bf == res.exact;
      }
      print(g, {r});
    } else if (app.got_subcommand(einv)) {
      const auto res = energy_inv(K, m, eo);
      Record r = base;
      r["m"] = m;
      r["value"] = to_decimal(res.exact);
      r["main_term"] = energy_inv_main_term(K.q(), K.degree(), m);
      r["ratio"] = to_double(res.exact) / r["main_term"].get<double>();
      print(g, {r});
    } else if (app.got_subcommand(bsq) || app.got_subcommand(binv)) {
      const auto [alpha_w, beta_w] = weights(weight_spec, g.seed, m, n, K.q());
      const Elem c = parse_elem(K, twist);
      const bool sq = app.got_subcommand(bsq);
      const auto res = sq ? bilinear_sqrt(K, alpha_w, beta_w, c, bo) : bilinear_inv(K, alpha_w, beta_w, c, bo);
      Record r = base;
      r["params"] = "m=" + std::to_string(m) + ";n=" + std::to_string(n) + ";c=" + twist;
      r = complex_fields(r, res.value);
      r["trivial_bound"] = res.trivial_bound;
      r["main_term"] = res.main_term;
      r["ratio"] = res.ratio;
      print(g, {r});
    } else if (app.got_subcommand(cs)) {
      std::vector<std::uint64_t> indices;
      if (chi.rfind("sample:", 0) == 0) {
        const int count = std::stoi(chi.substr(7));
        std::mt19937_64 rng(g.seed);
        std::uniform_int_distribution<std::uint64_t> pick(1, K.size() - 2);
        for (int i = 0; i < count; ++i) indices.push_back(pick(rng));
      } else {
        indices.push_back(std::stoull(chi));
      }
      std::vector<Record> rows;
      for (auto idx : indices) {
        const auto res = charsum(K, parse_monic_set(set), n, idx);
        Record r = base;
        r["params"] = "set=" + set + ";n=" + std::to_string(n) + ";chi=" + std::to_string(idx);
        r = complex_fields(r, res.value);
        r["terms"] = res.terms;
        r["main_term"] = res.main_term;
        r["envelope"] = res.envelope;
        r["ratio"] = res.ratio;
        rows.push_back(r);
      }
      print(g, rows);
    } else if (app.got_subcommand(rc)) {
      const Elem a = parse_elem(K, a_text);
      const auto res = kind == "N"     ? count_N(K, a, n, h, co)
                       : kind == "Nsf" ? count_N_squarefree(K, a, n, h, co)
                                       : count_Q(K, a, n, h, co);
      Record r = base;
      r["kind"] = kind;
      r["a"] = a_text;
      r["n"] = n;
      r["h"] = h;
      r["count"] = to_decimal(res.count);
      r["main_term"] = res.main_term;
      r["error_exponent"] = res.error_exponent ? Record(*res.error_exponent) : Record(nullptr);
      r["method"] = res.method;
      r["note"] = res.note;
      print(g, {r});
    } else if (app.got_subcommand(ps)) {
      const Poly a = K.ring().rem(parse_poly(a_text, K.base()), K.modulus());
      Record r = base;
      r["a"] = a_text;
      r["k"] = k;
      r["m"] = m;
      r["squarefree"] = squarefree;
      r["count"] = to_decimal(squarefree ? psi_smooth_squarefree(K, a, k, m, co) : psi_smooth(K, a, k, m, co));
      print(g, {r});
    } else if (app.got_subcommand(sr)) {
      MAlphaOptions mo;
      mo.monic_only = monic_only;
      mo.degree_ceiling = ceiling;
      mo.workers = g.workers;
      if (g.budget > 0) mo.enumeration_budget = static_cast<std::uint64_t>(g.budget);
      const auto res = find_M_alpha(K, Rational::parse(alpha), mo);
      const auto why = validate_witnesses(K, res);
      if (g.format == "csv") {
        std::vector<Record> rows;
        for (std::uint32_t c = 1; c < res.witness.size(); ++c) {
          Record r;
          r["class_encoding"] = c;
          r["witness_poly"] = format_poly(res.witness[c]);
          r["degree"] = res.witness[c].is_zero() ? -1 : res.witness[c].degree();
          rows.push_back(r);
        }
        print(g, rows);
      } else {
        Record r = base;
        r["alpha"] = Rational::parse(alpha).to_string();
        r["smooth_bound"] = res.smooth_bound;
        r["monic_only"] = res.monic_only;
        r["M"] = res.M ? Record(*res.M) : Record("inf");
        r["degree_ceiling"] = res.degree_ceiling;
        r["covered"] = res.covered;
        r["witnesses_valid"] = why.empty();
        Record w = Record::array();
        for (std::uint32_t c = 1; c < res.witness.size(); ++c)
          w.push_back({{"class_encoding", c}, {"witness_poly", format_poly(res.witness[c])}});
        r["witnesses"] = w;
        print(g, {r});
      }
      if (!why.empty()) {
        std::cerr << "witness check failed: " << why << '\n';
        return 1;
      }
    }
  } catch (const CLI::Error& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
