#include "ffenergy/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "ffenergy/bilinear.hpp"
#include "ffenergy/energy.hpp"
#include "ffenergy/enumerate.hpp"
#include "ffenergy/residue_classes.hpp"
#include "parallel.hpp"

namespace ffenergy {

using nlohmann::json;

namespace {

std::string fmt(double x) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string fmt(std::complex<double> z) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.10g%+.10gi", z.real() == 0 ? 0.0 : z.real(), z.imag() == 0 ? 0.0 : z.imag());
  return buf;
}

BigInt ipow(std::uint64_t q, int e) {
  BigInt out = 1;
  for (int i = 0; i < e; ++i) out *= q;
  return out;
}

int resolve_bound(const std::string& text, int r) {
  if (text == "r") return r;
  if (text == "r-1") return r - 1;
  if (text == "ceil_half_r") return (r + 1) / 2;
  if (text == "floor_half_r") return r / 2;
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty())
    throw std::invalid_argument("bad range bound '" + text + "' (integer, r, r-1, ceil_half_r or floor_half_r)");
  return v;
}

std::string bound_text(const json& j, const std::string& key) {
  if (j.is_number_integer()) return std::to_string(j.get<int>());
  if (j.is_string()) return j.get<std::string>();
  throw std::invalid_argument("grid." + key + ": bounds must be integers or strings");
}

IntRange parse_range(const json& j, const std::string& key) {
  IntRange out;
  if (j.is_number_integer()) {
    out.values = std::vector<int>{j.get<int>()};
  } else if (j.is_array()) {
    std::vector<int> v;
    for (const auto& x : j) {
      if (!x.is_number_integer()) throw std::invalid_argument("grid." + key + ": list entries must be integers");
      v.push_back(x.get<int>());
    }
    out.values = v;
  } else if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (k == "min") out.min = bound_text(v, key);
      else if (k == "max") out.max = bound_text(v, key);
      else throw std::invalid_argument("grid." + key + ": unknown key '" + k + "'");
    }
  } else {
    throw std::invalid_argument("grid." + key + ": expected an integer, a list or {min, max}");
  }
  return out;
}

template <class T>
std::vector<T> parse_list(const json& j, const std::string& key) {
  std::vector<T> out;
  auto one = [&](const json& x) {
    try {
      out.push_back(x.get<T>());
    } catch (const json::exception&) {
      throw std::invalid_argument(key + ": bad entry " + x.dump());
    }
  };
  if (j.is_array()) {
    for (const auto& x : j) one(x);
  } else {
    one(j);
  }
  return out;
}

std::vector<FieldSpec> parse_fields(const json& j) {
  std::vector<FieldSpec> out;
  auto one = [&](const json& f) {
    if (f.is_string()) {
      out.push_back(FieldSpec::parse(f.get<std::string>()));
      return;
    }
    if (!f.is_object()) throw std::invalid_argument("fields: expected a spec string or {p, e, r}");
    FieldSpec base;
    std::vector<int> rs;
    for (const auto& [k, v] : f.items()) {
      if (k == "p") base.p = v.get<std::uint32_t>();
      else if (k == "e") base.e = v.get<std::uint32_t>();
      else if (k == "r") {
        const auto range = parse_range(v, "fields.r");
        rs = range.values ? *range.values : std::vector<int>{};
        if (!range.values)
          for (int r = resolve_bound(range.min, 0); r <= resolve_bound(range.max, 0); ++r) rs.push_back(r);
      } else {
        throw std::invalid_argument("fields: unknown key '" + k + "'");
      }
    }
    if (rs.empty()) throw std::invalid_argument("fields: r is required");
    for (int r : rs) {
      FieldSpec s = base;
      s.r = r;
      out.push_back(s);
    }
  };
  if (j.is_array()) {
    for (const auto& f : j) one(f);
  } else {
    one(j);
  }
  return out;
}

struct Point {
  std::size_t field;
  std::string quantity;
  std::map<std::string, std::string> params;
  std::vector<std::pair<std::string, std::string>> ordered;

  void set(const std::string& key, const std::string& value) { ordered.emplace_back(key, value); params[key] = value; }
  int i(const std::string& key) const { return std::stoi(params.at(key)); }
  std::uint64_t u(const std::string& key) const { return std::stoull(params.at(key)); }
  std::string text() const {
    std::string out;
    for (const auto& [k, v] : ordered) out += (out.empty() ? "" : ";") + k + "=" + v;
    return out;
  }
};

struct Checks {
  std::string text;
  void add(const std::string& name, bool ok) { mark(name, ok ? "pass" : "fail"); }
  void mark(const std::string& name, const std::string& outcome) {
    text += (text.empty() ? "" : ";") + name + "=" + outcome;
  }
};

std::string main_formula(const std::string& quantity) {
  static const std::map<std::string, std::string> tags = {
      {"energy_sqrt", "E^sqrt(beta): ||beta||_1^2 ||beta||_inf^2 q^(m/2) (q^(m-r/2)+1)"},
      {"energy_inv", "E^inv: q^((7m-r)/2) + q^(2m)"},
      {"bilinear_sqrt",
       "W^sqrt: ||alpha||_2 ||beta||_1^(3/4) ||beta||_inf^(1/4) q^(r/8+5m/16+n/16) (q^(m/8-r/16)+1)(q^(n/8-r/16)+1)"},
      {"bilinear_inv",
       "W^inv: ||alpha||_inf ||beta||_inf q^(r/8+3m/4+3n/4) (q^(3m/16-r/16)+1)(q^(3n/16-r/16)+1)"},
      {"vinogradov", "Vinogradov: q^(r/2) ||alpha||_2 ||beta||_2 (exact)"},
      {"irr_recip", "irreducible reciprocal sum: q^B(r,n)"},
      {"charsum", "character sum over P_n or M_n: q^(n/2); over S_n: n q^(n/2)"},
      {"N", "N_F: w_n^2 q^(h-r)"},
      {"Nsf", "N_F^#: w_n^2 q^(h-r) (q-1)/q^2"},
      {"Q", "Q_F: q^n (q^(n+h-r)+1)"},
      {"psi", ""},
      {"psi_sf", ""},
      {"M_alpha", "M_alpha: compare 2r"},
  };
  return tags.at(quantity);
}

struct Evaluated {
  std::string value;
  double magnitude = 0;
  std::optional<double> main_term;
  Checks checks;
};

class Evaluator {
 public:
  Evaluator(const SweepSpec& spec, const std::vector<ResidueField>& fields) : spec_(spec), fields_(fields) {}

  Evaluated run(const Point& pt) const {
    const ResidueField& K = fields_[pt.field];
    const auto& qn = pt.quantity;
    if (qn == "energy_sqrt") return energy_sqrt_point(K, pt);
    if (qn == "energy_inv") return energy_inv_point(K, pt);
    if (qn == "bilinear_sqrt" || qn == "bilinear_inv") return bilinear_point(K, pt);
    if (qn == "vinogradov") return vinogradov_point(K, pt);
    if (qn == "irr_recip") return irr_recip_point(K, pt);
    if (qn == "charsum") return charsum_point(K, pt);
    if (qn == "N" || qn == "Nsf" || qn == "Q") return class_point(K, pt);
    if (qn == "psi" || qn == "psi_sf") return psi_point(K, pt);
    if (qn == "M_alpha") return m_alpha_point(K, pt);
    throw std::logic_error("unhandled quantity " + qn);
  }

 private:
  EnergyOptions energy_opt() const {
    EnergyOptions o;
    o.pair_limit = spec_.term_limit;
    return o;
  }
  BilinearOptions bilinear_opt() const {
    BilinearOptions o;
    o.term_limit = spec_.term_limit;
    return o;
  }
  ClassOptions class_opt() const {
    ClassOptions o;
    o.enumeration_budget = spec_.enumeration_budget;
    return o;
  }

  Evaluated energy_sqrt_point(const ResidueField& K, const Point& pt) const {
    const int m = pt.i("m");
    Evaluated ev;
    const auto res = energy_sqrt(K, m, energy_opt());
    ev.value = to_decimal(res.exact);
    ev.magnitude = to_double(res.exact);
    ev.main_term = energy_sqrt_main_term(K.q(), K.degree(), m, double(K.window_size(m)), 1.0);
    const BigInt roots = root_set(K, m).size();
    ev.checks.add("mass", difference_histogram(K, m, energy_opt()).total() == roots * roots);
    if (m == K.degree()) ev.checks.add("full_window", res.exact == ipow(K.q(), 3 * K.degree()));
    return ev;
  }

  Evaluated energy_inv_point(const ResidueField& K, const Point& pt) const {
    const int m = pt.i("m");
    Evaluated ev;
    const auto res = energy_inv(K, m, energy_opt());
    ev.value = to_decimal(res.exact);
    ev.magnitude = to_double(res.exact);
    ev.main_term = energy_inv_main_term(K.q(), K.degree(), m);
    const BigInt units = BigInt(K.window_size(m)) - 1;
    ev.checks.add("mass", inv_histogram(K, m, energy_opt()).total() == units * units);
    if (m == 1) {
      const BigInt q = K.q();
      ev.checks.add("constants", res.exact == (q - 1) * (q - 1) + (q - 1) * (q - 2) * (q - 2));
    }
    return ev;
  }

  std::pair<Weight, Weight> weights(const ResidueField& K, int m, int n, std::uint64_t seed) const {
    if (spec_.alpha_file && spec_.beta_file)
      return {Weight::load(*spec_.alpha_file, m, K.q()), Weight::load(*spec_.beta_file, n, K.q())};
    return {Weight::random(m, K.q(), 2 * seed), Weight::random(n, K.q(), 2 * seed + 1)};
  }

  Evaluated bilinear_point(const ResidueField& K, const Point& pt) const {
    const int m = pt.i("m"), n = pt.i("n");
    const Elem c(static_cast<std::uint32_t>(pt.u("c")));
    const auto [a, b] = weights(K, m, n, pt.u("seed"));
    const auto res = pt.quantity == "bilinear_sqrt" ? bilinear_sqrt(K, a, b, c, bilinear_opt())
                                                    : bilinear_inv(K, a, b, c, bilinear_opt());
    Evaluated ev;
    ev.value = fmt(res.value);
    ev.magnitude = res.abs;
    ev.main_term = res.main_term;
    ev.checks.add("trivial", res.abs <= res.trivial_bound * (1 + 1e-9));
    return ev;
  }

  Evaluated vinogradov_point(const ResidueField& K, const Point& pt) const {
    const Elem c(static_cast<std::uint32_t>(pt.u("c")));
    const auto [a, b] = weights(K, K.degree(), K.degree(), pt.u("seed"));
    const auto res = vinogradov_sum(K, a, b, c, bilinear_opt());
    Evaluated ev;
    ev.value = fmt(res.value);
    ev.magnitude = res.abs;
    ev.main_term = res.main_term;
    ev.checks.add("hard_bound", res.hard_bound_holds);
    return ev;
  }

  Evaluated irr_recip_point(const ResidueField& K, const Point& pt) const {
    const Elem c(static_cast<std::uint32_t>(pt.u("c")));
    const auto res = irreducible_reciprocal_sum(K, pt.i("n"), c, bilinear_opt());
    Evaluated ev;
    ev.value = fmt(res.value);
    ev.magnitude = res.abs;
    ev.main_term = res.main_term;
    ev.checks.add("trivial", res.abs <= res.trivial_bound * (1 + 1e-9));
    return ev;
  }

  Evaluated charsum_point(const ResidueField& K, const Point& pt) const {
    const auto res = charsum(K, parse_monic_set(pt.params.at("set")), pt.i("n"), pt.u("chi"));
    Evaluated ev;
    ev.value = fmt(res.value);
    ev.magnitude = res.abs;
    ev.main_term = res.main_term;
    if (res.principal) ev.checks.add("principal", std::abs(res.value - double(res.terms)) < 1e-6);
    else ev.checks.mark("envelope", res.abs <= res.envelope ? "pass" : "warn");
    return ev;
  }

  Evaluated class_point(const ResidueField& K, const Point& pt) const {
    const Elem a(static_cast<std::uint32_t>(pt.u("a")));
    const int n = pt.i("n"), h = pt.i("h");
    ClassCountResult res;
    if (pt.quantity == "N") res = count_N(K, a, n, h, class_opt());
    else if (pt.quantity == "Nsf") res = count_N_squarefree(K, a, n, h, class_opt());
    else res = count_Q(K, a, n, h, class_opt());
    Evaluated ev;
    ev.value = to_decimal(res.count);
    ev.magnitude = to_double(res.count);
    ev.main_term = res.main_term;
    const BigInt w = count_irreducibles(K.q(), n);
    ev.checks.add("upper", res.count <= w * w);
    if (h == K.degree() && pt.quantity != "Nsf") ev.checks.add("full_window", res.count == w * w);
    if (pt.quantity == "Nsf") ev.checks.add("restriction", res.count <= count_N(K, a, n, h, class_opt()).count);
    if (!res.note.empty()) ev.checks.mark("hypothesis", "note");
    return ev;
  }

  Evaluated psi_point(const ResidueField& K, const Point& pt) const {
    const std::uint64_t code = pt.u("a");
    if (code == 0 || code >= K.size()) throw std::invalid_argument("class a must be a nonzero encoding below q^r");
    const Poly a = K.to_poly(Elem(static_cast<std::uint32_t>(code)));
    const int k = pt.i("k"), m = pt.i("m");
    const BigInt sf = psi_smooth_squarefree(K, a, k, m, class_opt());
    const BigInt all = psi_smooth(K, a, k, m, class_opt());
    Evaluated ev;
    ev.value = to_decimal(pt.quantity == "psi" ? all : sf);
    ev.magnitude = to_double(pt.quantity == "psi" ? all : sf);
    ev.checks.add("sf_le_psi", sf <= all);
    return ev;
  }

  Evaluated m_alpha_point(const ResidueField& K, const Point& pt) const {
    MAlphaOptions opt;
    opt.enumeration_budget = spec_.enumeration_budget;
    const auto res = find_M_alpha(K, Rational::parse(pt.params.at("alpha")), opt);
    Evaluated ev;
    ev.value = res.M ? std::to_string(*res.M) : "inf";
    ev.magnitude = res.M ? *res.M : INFINITY;
    if (res.M) ev.main_term = 2.0 * K.degree();
    ev.checks.add("witnesses", validate_witnesses(K, res).empty());
    ev.checks.mark("finite", res.M ? "pass" : "warn");
    return ev;
  }

  const SweepSpec& spec_;
  const std::vector<ResidueField>& fields_;
};

std::vector<Point> expand_grid(const SweepSpec& spec, const std::vector<ResidueField>& fields) {
  std::vector<Point> out;
  for (std::size_t f = 0; f < fields.size(); ++f) {
    const int r = fields[f].degree();
    const auto ms = spec.m.resolve(r), ns = spec.n.resolve(r), hs = spec.h.resolve(r), ks = spec.k.resolve(r);
    std::vector<std::uint64_t> seeds;
    for (int s = 0; s < spec.seeds; ++s) seeds.push_back(spec.seed + s);
    for (const auto& qn : spec.quantities) {
      auto push = [&](std::vector<std::pair<std::string, std::string>> kv) {
        Point p{f, qn, {}, {}};
        for (auto& [k, v] : kv) p.set(k, v);
        out.push_back(std::move(p));
      };
      auto str = [](auto x) { return std::to_string(x); };
      if (qn == "energy_sqrt" || qn == "energy_inv") {
        for (int m : ms) push({{"m", str(m)}});
      } else if (qn == "bilinear_sqrt" || qn == "bilinear_inv") {
        for (int m : ms)
          for (int n : ns)
            for (auto c : spec.twist)
              for (auto s : seeds)
                push({{"m", str(m)}, {"n", str(n)}, {"c", str(c)}, {"seed", spec.alpha_file ? "file" : str(s)}});
      } else if (qn == "vinogradov") {
        for (auto c : spec.twist)
          for (auto s : seeds) push({{"c", str(c)}, {"seed", spec.alpha_file ? "file" : str(s)}});
      } else if (qn == "irr_recip") {
        for (int n : ns)
          for (auto c : spec.twist) push({{"n", str(n)}, {"c", str(c)}});
      } else if (qn == "charsum") {
        for (int n : ns)
          for (auto chi : spec.chi) push({{"set", spec.charsum_set}, {"n", str(n)}, {"chi", str(chi)}});
      } else if (qn == "N" || qn == "Nsf" || qn == "Q") {
        for (auto a : spec.a)
          for (int n : ns)
            for (int h : hs) push({{"a", str(a)}, {"n", str(n)}, {"h", str(h)}});
      } else if (qn == "psi" || qn == "psi_sf") {
        for (auto a : spec.a)
          for (int k : ks)
            for (int m : ms) push({{"a", str(a)}, {"k", str(k)}, {"m", str(m)}});
      } else if (qn == "M_alpha") {
        for (const auto& al : spec.alpha) push({{"alpha", Rational::parse(al).to_string()}});
      }
    }
  }
  return out;
}

bool has_fail(const std::string& checks) { return checks.find("=fail") != std::string::npos; }

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

json row_json(const ReportRow& r) {
  json j;
  j["field"] = r.field;
  j["quantity"] = r.quantity;
  j["params"] = r.params;
  j["value"] = r.value;
  j["main_term"] = r.main_term ? json(*r.main_term) : json(nullptr);
  j["ratio"] = r.ratio ? json(*r.ratio) : json(nullptr);
  j["checks"] = r.checks;
  j["status"] = r.status;
  j["reason"] = r.reason;
  j["bound"] = r.bound;
  j["elapsed_ms"] = r.elapsed_ms;
  return j;
}

}  // namespace

const std::vector<std::string>& sweep_quantities() {
  static const std::vector<std::string> names = {"energy_sqrt", "energy_inv", "bilinear_sqrt", "bilinear_inv",
                                                 "vinogradov",  "irr_recip",  "charsum",       "N",
                                                 "Nsf",         "Q",          "psi",           "psi_sf",
                                                 "M_alpha"};
  return names;
}

std::vector<int> IntRange::resolve(int r) const {
  if (values) return *values;
  std::vector<int> out;
  for (int v = resolve_bound(min, r); v <= resolve_bound(max, r); ++v) out.push_back(v);
  return out;
}

SweepSpec SweepSpec::parse(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("sweep spec is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("sweep spec must be a JSON object");
  SweepSpec s;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "fields" || key == "field") {
        s.fields = parse_fields(v);
      } else if (key == "quantity" || key == "quantities") {
        s.quantities = parse_list<std::string>(v, key);
      } else if (key == "grid") {
        if (!v.is_object()) throw std::invalid_argument("grid must be an object");
        for (const auto& [g, gv] : v.items()) {
          if (g == "m") s.m = parse_range(gv, g);
          else if (g == "n") s.n = parse_range(gv, g);
          else if (g == "h") s.h = parse_range(gv, g);
          else if (g == "k") s.k = parse_range(gv, g);
          else if (g == "alpha") {
            s.alpha.clear();
            for (const auto& x : gv.is_array() ? gv : json::array({gv}))
              s.alpha.push_back(x.is_string() ? x.get<std::string>() : x.dump());
          } else if (g == "c") s.twist = parse_list<std::uint32_t>(gv, "grid.c");
          else if (g == "a") s.a = parse_list<std::uint32_t>(gv, "grid.a");
          else if (g == "chi") s.chi = parse_list<std::uint64_t>(gv, "grid.chi");
          else throw std::invalid_argument("grid: unknown key '" + g + "'");
        }
      } else if (key == "options") {
        if (!v.is_object()) throw std::invalid_argument("options must be an object");
        for (const auto& [o, ov] : v.items()) {
          if (o == "seed") s.seed = ov.get<std::uint64_t>();
          else if (o == "seeds") s.seeds = ov.get<int>();
          else if (o == "term_limit") s.term_limit = ov.get<double>();
          else if (o == "enumeration_budget") s.enumeration_budget = ov.get<std::uint64_t>();
          else if (o == "soft_threshold") s.soft_threshold = ov.get<double>();
          else if (o == "workers") s.workers = ov.get<unsigned>();
          else if (o == "timing") s.timing = ov.get<bool>();
          else if (o == "cache_dir") s.cache_dir = ov.get<std::string>();
          else if (o == "set") s.charsum_set = to_string(parse_monic_set(ov.get<std::string>()));
          else if (o == "alpha_file") s.alpha_file = ov.get<std::string>();
          else if (o == "beta_file") s.beta_file = ov.get<std::string>();
          else throw std::invalid_argument("options: unknown key '" + o + "'");
        }
      } else {
        throw std::invalid_argument("unknown key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("sweep spec: ") + e.what());
  }
  const auto& known = sweep_quantities();
  for (const auto& q : s.quantities)
    if (std::find(known.begin(), known.end(), q) == known.end())
      throw std::invalid_argument("unknown quantity '" + q + "'");
  for (const auto& al : s.alpha) Rational::parse(al);
  if (s.seeds < 0) throw std::invalid_argument("options.seeds must be >= 0");
  if (s.alpha_file.has_value() != s.beta_file.has_value())
    throw std::invalid_argument("options: alpha_file and beta_file go together");
  return s;
}

SweepSpec SweepSpec::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read sweep spec " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::size_t BoundReport::failures() const {
  return std::count_if(rows.begin(), rows.end(),
                       [](const ReportRow& r) { return r.status == "error" || has_fail(r.checks); });
}

std::size_t BoundReport::warnings() const {
  return std::count_if(rows.begin(), rows.end(),
                       [](const ReportRow& r) { return r.checks.find("=warn") != std::string::npos; });
}

std::size_t BoundReport::skipped() const {
  return std::count_if(rows.begin(), rows.end(), [](const ReportRow& r) { return r.status == "skipped"; });
}

BoundReport run_sweep(const SweepSpec& spec) {
  std::vector<ResidueField> fields;
  fields.reserve(spec.fields.size());
  BuildOptions bo;
  bo.auto_modulus = true;
  bo.cache_dir = spec.cache_dir;
  for (const auto& f : spec.fields) fields.push_back(ResidueField::build(f, bo));

  const auto points = expand_grid(spec, fields);
  const Evaluator eval(spec, fields);
  BoundReport report;
  report.seed = spec.seed;
  report.soft_threshold = spec.soft_threshold;
  report.rows.resize(points.size());

  detail::for_blocks(points.size(), spec.workers, [&](std::size_t, std::size_t lo, std::size_t hi, unsigned) {
    for (std::size_t i = lo; i < hi; ++i) {
      const Point& pt = points[i];
      ReportRow& row = report.rows[i];
      row.field = fields[pt.field].spec_string();
      row.quantity = pt.quantity;
      row.params = pt.text();
      row.bound = main_formula(pt.quantity);
      const auto start = std::chrono::steady_clock::now();
      try {
        auto ev = eval.run(pt);
        row.value = ev.value;
        if (ev.main_term && *ev.main_term > 0) {
          row.main_term = ev.main_term;
          row.ratio = ev.magnitude / *ev.main_term;
          if (!std::isfinite(*row.ratio) || *row.ratio > spec.soft_threshold) ev.checks.mark("ratio", "warn");
        }
        row.checks = ev.checks.text;
      } catch (const BudgetExceeded& e) {
        row.status = "skipped";
        row.reason = e.what();
      } catch (const std::invalid_argument& e) {
        row.status = "skipped";
        row.reason = e.what();
      } catch (const std::out_of_range& e) {
        row.status = "skipped";
        row.reason = e.what();
      } catch (const std::exception& e) {
        row.status = "error";
        row.reason = e.what();
      }
      if (spec.timing) {
        const std::chrono::duration<double, std::milli> dt = std::chrono::steady_clock::now() - start;
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3f", dt.count());
        row.elapsed_ms = buf;
      }
    }
  });
  return report;
}

void write_csv(const BoundReport& report, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : report.rows) {
    std::string checks = r.checks;
    if (r.status != "ok") checks = "status=" + r.status + (r.reason.empty() ? "" : " (" + r.reason + ")");
    out << csv_cell(r.field) << ',' << csv_cell(r.quantity) << ',' << csv_cell(r.params) << ','
        << csv_cell(r.value) << ',' << (r.main_term ? fmt(*r.main_term) : "") << ','
        << (r.ratio ? fmt(*r.ratio) : "") << ',' << csv_cell(checks) << ',' << r.elapsed_ms << '\n';
  }
}

void write_json(const BoundReport& report, std::ostream& out) { out << to_json(report); }

std::string to_csv(const BoundReport& report) {
  std::ostringstream out;
  write_csv(report, out);
  return out.str();
}

std::string to_json(const BoundReport& report) {
  json j;
  j["version"] = report.version;
  j["seed"] = report.seed;
  j["weight_generator"] = report.weight_generator;
  j["soft_threshold"] = report.soft_threshold;
  j["rows"] = json::array();
  for (const auto& r : report.rows) j["rows"].push_back(row_json(r));
  j["summary"] = {{"rows", report.rows.size()},
                  {"failures", report.failures()},
                  {"warnings", report.warnings()},
                  {"skipped", report.skipped()}};
  return j.dump(2) + "\n";
}

BoundReport load_report_json(std::string_view text) {
  BoundReport rep;
  try {
    const json j = json::parse(text);
    rep.version = j.at("version").get<std::string>();
    rep.seed = j.at("seed").get<std::uint64_t>();
    rep.weight_generator = j.at("weight_generator").get<std::string>();
    rep.soft_threshold = j.at("soft_threshold").get<double>();
    for (const auto& r : j.at("rows")) {
      ReportRow row;
      row.field = r.at("field").get<std::string>();
      row.quantity = r.at("quantity").get<std::string>();
      row.params = r.at("params").get<std::string>();
      row.value = r.at("value").get<std::string>();
      if (!r.at("main_term").is_null()) row.main_term = r.at("main_term").get<double>();
      if (!r.at("ratio").is_null()) row.ratio = r.at("ratio").get<double>();
      row.checks = r.at("checks").get<std::string>();
      row.status = r.at("status").get<std::string>();
      row.reason = r.at("reason").get<std::string>();
      row.bound = r.at("bound").get<std::string>();
      row.elapsed_ms = r.at("elapsed_ms").get<std::string>();
      rep.rows.push_back(std::move(row));
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad report JSON: ") + e.what());
  }
  return rep;
}

void emit(const BoundReport& report, const std::string& format, const std::filesystem::path& path) {
  if (format != "csv" && format != "json") throw std::invalid_argument("format must be csv or json");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  if (format == "csv") write_csv(report, out);
  else write_json(report, out);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

// ---------------------------------------------------------------------------
// selftest

bool SelftestReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const SelftestCheck& c) { return c.pass; });
}

std::string SelftestReport::first_failure() const {
  for (const auto& c : checks)
    if (!c.pass) return c.name;
  return {};
}

namespace {

ResidueField pinned(std::uint32_t p, int r, const std::optional<std::filesystem::path>& cache_dir) {
  BuildOptions bo;
  bo.auto_modulus = true;
  bo.cache_dir = cache_dir;
  return ResidueField::build(FieldSpec{p, 1, r, std::nullopt}, bo);
}

void run_check(SelftestReport& rep, const std::string& name, const std::function<std::string()>& body) {
  SelftestCheck c{name, false, {}};
  try {
    c.detail = body();
    c.pass = c.detail.empty();
  } catch (const std::exception& e) {
    c.detail = e.what();
  }
  rep.checks.push_back(std::move(c));
}

std::string field_checks(SelftestReport& rep, const ResidueField& K, bool full) {
  const std::string tag = K.spec_string();
  const std::uint64_t q = K.q();
  const int r = K.degree();

  run_check(rep, "dual_basis " + tag, [&]() -> std::string {
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j)
        if (K.trace(K.mul(K.rho_power(i), K.dual_basis()[j])) != (i == j ? 1u : 0u))
          return "Tr(rho^" + std::to_string(i) + " omega_" + std::to_string(j) + ") wrong";
    return {};
  });
  run_check(rep, "window_indicator " + tag, [&]() -> std::string {
    for (int h = 1; h <= r; ++h)
      for (std::uint32_t u = 0; u < K.size(); ++u) {
        const BigInt expect = K.in_window(Elem(u), h) ? ipow(q, r - h) : BigInt(0);
        if (K.dual_basis_indicator(Elem(u), h) != expect)
          return "u=" + std::to_string(u) + " h=" + std::to_string(h);
      }
    return {};
  });
  run_check(rep, "energy_oracle " + tag, [&]() -> std::string {
    for (int m = 1; m <= r; ++m)
      if (energy_sqrt(K, m).exact != energy_sqrt_bruteforce(K, m)) return "m=" + std::to_string(m);
    return {};
  });
  run_check(rep, "energy_inv_constants " + tag, [&]() -> std::string {
    const BigInt Q = q;
    const BigInt expect = (Q - 1) * (Q - 1) + (Q - 1) * (Q - 2) * (Q - 2);
    return energy_inv(K, 1).exact == expect ? "" : "E^inv(1) = " + to_decimal(energy_inv(K, 1).exact);
  });
  run_check(rep, "fourth_moment " + tag, [&]() -> std::string {
    for (Elem c : {Elem(1), K.generator(), Elem(K.size() - 1)})
      for (int m = 1; m <= r; ++m) {
        const auto chk = fourth_moment_check(K, m, c);
        if (!chk.pass) return "m=" + std::to_string(m) + " c=" + std::to_string(c.value) + " rel_err=" + fmt(chk.rel_err);
      }
    return {};
  });
  run_check(rep, "parseval " + tag, [&]() -> std::string {
    for (int m = 1; m <= r; ++m) {
      const auto A = a_lambda_spectrum(K, m, Elem(1));
      double s = 0;
      for (const auto& z : A) s += std::norm(z);
      const double expect = double(K.size()) * double(root_set(K, m).size());
      if (std::abs(s - expect) > 1e-9 * expect) return "m=" + std::to_string(m);
    }
    return {};
  });
  run_check(rep, "mass_identities " + tag, [&]() -> std::string {
    for (int m = 1; m <= r; ++m) {
      const BigInt R = root_set(K, m).size();
      if (difference_histogram(K, m).total() != R * R) return "sum Q_lambda, m=" + std::to_string(m);
      const BigInt u = BigInt(K.window_size(m)) - 1;
      if (inv_histogram(K, m).total() != u * u) return "sum I_F, m=" + std::to_string(m);
    }
    return {};
  });
  run_check(rep, "full_window " + tag, [&]() -> std::string {
    if (energy_sqrt(K, r).exact != ipow(q, 3 * r)) return "E^sqrt(1_r) != q^(3r)";
    for (int n = 1; n < r; ++n) {
      const BigInt w = count_irreducibles(q, n);
      for (std::uint32_t a = 1; a < K.size(); a += full ? 1 : 7)
        if (count_N(K, Elem(a), n, r).count != w * w) return "N(a=" + std::to_string(a) + ", n, r)";
    }
    return {};
  });
  run_check(rep, "vinogradov " + tag, [&]() -> std::string {
    const int trials = full ? 100 : 20;
    for (int s = 0; s < trials; ++s) {
      const auto res = vinogradov_sum(K, Weight::random(r, K.q(), 2 * s), Weight::random(r, K.q(), 2 * s + 1),
                                      Elem(1 + s % (K.size() - 1)));
      if (!res.hard_bound_holds) return "seed " + std::to_string(s);
    }
    return {};
  });
  return tag;
}

}  // namespace

SelftestReport selftest(const std::string& level, const std::optional<std::filesystem::path>& cache_dir) {
  if (level != "quick" && level != "full") throw std::invalid_argument("selftest level must be quick or full");
  const bool full = level == "full";
  SelftestReport rep;

  run_check(rep, "gauss_formula", [&]() -> std::string {
    for (std::uint32_t q : full ? std::vector<std::uint32_t>{3, 5} : std::vector<std::uint32_t>{3})
      for (int n = 1; n <= (full ? 6 : 5); ++n) {
        const Fq F(q);
        const PolyRing R(F);
        if (count_irreducibles(q, n) != enumerate_irreducibles(R, n).size())
          return "q=" + std::to_string(q) + " n=" + std::to_string(n);
      }
    return {};
  });

  run_check(rep, "table_cache_rebuild", [&]() -> std::string {
    const auto dir = std::filesystem::temp_directory_path() /
                     ("ffenergy-selftest-" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(dir);
    struct Cleanup {
      std::filesystem::path p;
      ~Cleanup() {
        std::error_code ec;
        std::filesystem::remove_all(p, ec);
      }
    } cleanup{dir};
    const auto first = pinned(3, 3, dir);
    const auto file = first.cache_file(dir);
    {
      std::fstream f(file, std::ios::in | std::ios::out | std::ios::binary);
      f.seekg(40);
      char byte = 0;
      f.read(&byte, 1);
      byte = static_cast<char>(byte ^ 0x5a);
      f.seekp(40);
      f.write(&byte, 1);
    }
    const auto rebuilt = pinned(3, 3, dir);
    if (rebuilt.loaded_from_cache()) return "corrupted cache was accepted";
    for (std::uint32_t a = 1; a < rebuilt.size(); ++a)
      for (std::uint32_t b = 1; b < rebuilt.size(); ++b)
        if (rebuilt.mul(Elem(a), Elem(b)) != rebuilt.mul_reference(Elem(a), Elem(b))) return "rebuilt tables wrong";
    if (!pinned(3, 3, dir).loaded_from_cache()) return "rebuilt cache not reused";
    return {};
  });

  std::vector<std::pair<std::uint32_t, int>> specs = {{3, 3}};
  if (full) specs.insert(specs.end(), {{3, 2}, {3, 4}, {5, 3}});
  for (auto [p, r] : specs) field_checks(rep, pinned(p, r, cache_dir), full);

  run_check(rep, "energy_inv_q3", [&]() -> std::string {
    for (int r = 2; r <= (full ? 5 : 4); ++r)
      if (energy_inv(pinned(3, r, cache_dir), 1).exact != 6) return "r=" + std::to_string(r);
    return {};
  });

  run_check(rep, "triple_crosscheck", [&]() -> std::string {
    const auto K = pinned(3, 3, cache_dir);
    for (std::uint32_t a = 1; a <= 10; ++a) {
      const auto res = psi_triple_crosscheck(K, K.to_poly(Elem(a)), 5, 2, 1, 1);
      if (!res.pass || !res.unique_representation) return "a=" + std::to_string(a);
      if (res.psi_sf != psi_smooth_squarefree(K, K.to_poly(Elem(a)), 5, 2)) return "psi# mismatch a=" + std::to_string(a);
    }
    return {};
  });

  run_check(rep, "m_alpha_witnesses", [&]() -> std::string {
    for (int r = 2; r <= (full ? 4 : 3); ++r) {
      const auto K = pinned(3, r, cache_dir);
      const auto res = find_M_alpha(K, Rational{1, 1});
      if (!res.M) return "r=" + std::to_string(r) + " hit the ceiling";
      if (auto why = validate_witnesses(K, res); !why.empty()) return why;
    }
    return {};
  });
  return rep;
}

}  // namespace ffenergy
