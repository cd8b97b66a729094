#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ffenergy/bilinear.hpp"
#include "ffenergy/energy.hpp"
#include "ffenergy/enumerate.hpp"
#include "ffenergy/harness.hpp"
#include "ffenergy/residue_classes.hpp"

namespace py = pybind11;
using namespace ffenergy;

namespace {

py::int_ to_py(const BigInt& x) { return py::int_(py::module_::import("builtins").attr("int")(to_decimal(x))); }

Weight make_weight(const ResidueField& K, int window, const std::vector<std::complex<double>>& values) {
  return Weight(window, K.q(), values);
}

Poly make_poly(const ResidueField& K, const std::vector<std::uint32_t>& coeffs) {
  return K.ring().rem(Poly(coeffs), K.modulus());
}

py::dict bilinear_dict(const BilinearResult& r) {
  py::dict d;
  d["value"] = r.value;
  d["abs"] = r.abs;
  d["trivial_bound"] = r.trivial_bound;
  d["main_term"] = r.main_term;
  d["ratio"] = r.ratio;
  d["terms"] = r.terms;
  d["skipped_terms"] = r.skipped_terms;
  d["hard_bound"] = r.hard_bound ? py::object(py::float_(*r.hard_bound)) : py::object(py::none());
  d["hard_bound_holds"] = r.hard_bound_holds;
  return d;
}

py::dict class_dict(const ClassCountResult& r) {
  py::dict d;
  d["count"] = to_py(r.count);
  d["main_term"] = r.main_term;
  d["error_exponent"] = r.error_exponent ? py::object(py::float_(*r.error_exponent)) : py::object(py::none());
  d["method"] = r.method;
  d["note"] = r.note;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact additive energies, bilinear sums and residue-class counts over F_q[X]/F(X)";

  py::class_<ResidueField>(m, "Field")
      .def(py::init([](const std::string& spec, bool auto_modulus, std::optional<std::string> cache_dir) {
             BuildOptions bo;
             bo.auto_modulus = auto_modulus;
             if (cache_dir) bo.cache_dir = *cache_dir;
             return ResidueField::build(spec, bo);
           }),
           py::arg("spec"), py::arg("auto_modulus") = true, py::arg("cache_dir") = py::none())
      .def_property_readonly("q", &ResidueField::q)
      .def_property_readonly("p", &ResidueField::p)
      .def_property_readonly("r", &ResidueField::degree)
      .def_property_readonly("size", &ResidueField::size)
      .def_property_readonly("spec", &ResidueField::spec_string)
      .def_property_readonly("modulus", [](const ResidueField& K) { return K.modulus().coeffs(); })
      .def_property_readonly("generator", [](const ResidueField& K) { return K.generator().value; })
      .def_property_readonly("loaded_from_cache", &ResidueField::loaded_from_cache)
      .def("window_size", &ResidueField::window_size)
      .def("mul", [](const ResidueField& K, std::uint32_t a, std::uint32_t b) { return K.mul(Elem(a), Elem(b)).value; })
      .def("add", [](const ResidueField& K, std::uint32_t a, std::uint32_t b) { return K.add(Elem(a), Elem(b)).value; })
      .def("inv", [](const ResidueField& K, std::uint32_t a) { return K.inv(Elem(a)).value; })
      .def("in_window", [](const ResidueField& K, std::uint32_t a, int w) { return K.in_window(Elem(a), w); })
      .def("trace", [](const ResidueField& K, std::uint32_t a) { return K.trace(Elem(a)); })
      .def("absolute_trace", [](const ResidueField& K, std::uint32_t a) { return K.absolute_trace(Elem(a)); })
      .def("square_roots",
           [](const ResidueField& K, std::uint32_t a) {
             std::vector<std::uint32_t> out;
             for (Elem x : K.square_roots(Elem(a)).view()) out.push_back(x.value);
             return out;
           })
      .def("to_poly", [](const ResidueField& K, std::uint32_t a) { return K.to_poly(Elem(a)).coeffs(); })
      .def("from_poly",
           [](const ResidueField& K, const std::vector<std::uint32_t>& c) { return K.from_poly(make_poly(K, c)).value; })
      .def("dual_basis_indicator",
           [](const ResidueField& K, std::uint32_t u, int h) { return to_py(K.dual_basis_indicator(Elem(u), h)); })
      .def("__repr__", [](const ResidueField& K) { return "Field('" + K.spec_string() + "')"; });

  m.def("count_irreducibles", [](std::uint64_t q, int n) { return to_py(count_irreducibles(q, n)); });
  m.def("enumerate_irreducibles", [](std::uint32_t p, std::uint32_t e, int n) {
    std::vector<std::vector<std::uint32_t>> out;
    for (const auto& f : enumerate_irreducibles(PolyRing(Fq(p, e)), n)) out.push_back(f.coeffs());
    return out;
  }, py::arg("p"), py::arg("e"), py::arg("n"));

  m.def("energy_sqrt", [](const ResidueField& K, int w, unsigned workers) {
    EnergyOptions o;
    o.workers = workers;
    return to_py(energy_sqrt(K, w, o).exact);
  }, py::arg("field"), py::arg("m"), py::arg("workers") = 1);
  m.def("energy_sqrt_weighted", [](const ResidueField& K, int w, const std::vector<std::complex<double>>& beta) {
    return energy_sqrt(K, make_weight(K, w, beta)).value;
  }, py::arg("field"), py::arg("m"), py::arg("beta"));
  m.def("energy_sqrt_bruteforce", [](const ResidueField& K, int w) { return to_py(energy_sqrt_bruteforce(K, w)); });
  m.def("energy_inv", [](const ResidueField& K, int w) { return to_py(energy_inv(K, w).exact); });
  m.def("fourth_moment_check", [](const ResidueField& K, int w, std::uint32_t c) {
    const auto r = fourth_moment_check(K, w, Elem(c));
    py::dict d;
    d["lhs"] = r.lhs;
    d["rhs"] = to_py(r.rhs);
    d["rel_err"] = r.rel_err;
    d["pass"] = r.pass;
    return d;
  });
  m.def("energy_sqrt_main_term", &energy_sqrt_main_term);
  m.def("energy_inv_main_term", &energy_inv_main_term);

  m.def("bilinear_sqrt", [](const ResidueField& K, int mm, int n, const std::vector<std::complex<double>>& a,
                            const std::vector<std::complex<double>>& b, std::uint32_t c) {
    return bilinear_dict(bilinear_sqrt(K, make_weight(K, mm, a), make_weight(K, n, b), Elem(c)));
  }, py::arg("field"), py::arg("m"), py::arg("n"), py::arg("alpha"), py::arg("beta"), py::arg("c") = 1);
  m.def("bilinear_inv", [](const ResidueField& K, int mm, int n, const std::vector<std::complex<double>>& a,
                           const std::vector<std::complex<double>>& b, std::uint32_t c) {
    return bilinear_dict(bilinear_inv(K, make_weight(K, mm, a), make_weight(K, n, b), Elem(c)));
  }, py::arg("field"), py::arg("m"), py::arg("n"), py::arg("alpha"), py::arg("beta"), py::arg("c") = 1);
  m.def("vinogradov_sum", [](const ResidueField& K, const std::vector<std::complex<double>>& a,
                             const std::vector<std::complex<double>>& b, std::uint32_t c) {
    return bilinear_dict(vinogradov_sum(K, make_weight(K, K.degree(), a), make_weight(K, K.degree(), b), Elem(c)));
  }, py::arg("field"), py::arg("alpha"), py::arg("beta"), py::arg("c") = 1);
  m.def("random_weight", [](int window, std::uint32_t q, std::uint64_t seed) {
    const auto w = Weight::random(window, q, seed);
    return std::vector<std::complex<double>>(w.values().begin(), w.values().end());
  });
  m.def("b_exponent", &b_exponent);
  m.def("charsum", [](const ResidueField& K, const std::string& set, int n, std::uint64_t chi) {
    const auto r = charsum(K, parse_monic_set(set), n, chi);
    py::dict d;
    d["value"] = r.value;
    d["abs"] = r.abs;
    d["terms"] = r.terms;
    d["main_term"] = r.main_term;
    d["envelope"] = r.envelope;
    return d;
  }, py::arg("field"), py::arg("set"), py::arg("n"), py::arg("chi"));

  m.def("count_N", [](const ResidueField& K, std::uint32_t a, int n, int h) { return class_dict(count_N(K, Elem(a), n, h)); });
  m.def("count_N_squarefree",
        [](const ResidueField& K, std::uint32_t a, int n, int h) { return class_dict(count_N_squarefree(K, Elem(a), n, h)); });
  m.def("count_Q", [](const ResidueField& K, std::uint32_t a, int n, int h) { return class_dict(count_Q(K, Elem(a), n, h)); });
  m.def("psi_smooth", [](const ResidueField& K, const std::vector<std::uint32_t>& a, int k, int mm, bool squarefree) {
    const Poly ap = make_poly(K, a);
    return to_py(squarefree ? psi_smooth_squarefree(K, ap, k, mm) : psi_smooth(K, ap, k, mm));
  }, py::arg("field"), py::arg("a"), py::arg("k"), py::arg("m"), py::arg("squarefree") = false);
  m.def("find_M_alpha", [](const ResidueField& K, const std::string& alpha, bool monic_only) {
    MAlphaOptions o;
    o.monic_only = monic_only;
    const auto r = find_M_alpha(K, Rational::parse(alpha), o);
    py::dict d;
    d["M"] = r.M ? py::object(py::int_(*r.M)) : py::object(py::float_(INFINITY));
    d["smooth_bound"] = r.smooth_bound;
    d["covered"] = r.covered;
    std::vector<std::vector<std::uint32_t>> w;
    for (const auto& p : r.witness) w.push_back(p.coeffs());
    d["witnesses"] = w;
    d["valid"] = validate_witnesses(K, r).empty();
    return d;
  }, py::arg("field"), py::arg("alpha") = "1", py::arg("monic_only") = false);
  m.def("count_suv", [](const ResidueField& K, std::uint32_t a, int T, int W, int kfac) {
    const auto r = count_suv(K, Elem(a), T, W, kfac);
    py::dict d;
    d["count"] = to_py(r.count);
    d["s_size"] = r.s_size;
    d["u_size"] = r.u_size;
    d["main_term"] = r.main_term;
    return d;
  });

  m.def("run_sweep", [](const std::string& spec_json, std::optional<unsigned> workers) {
    auto spec = SweepSpec::parse(spec_json);
    if (workers) spec.workers = *workers;
    BoundReport rep;
    {
      py::gil_scoped_release release;
      rep = run_sweep(spec);
    }
    return py::make_tuple(to_csv(rep), to_json(rep), rep.exit_code());
  }, py::arg("spec_json"), py::arg("workers") = py::none());
  m.def("selftest", [](const std::string& level) {
    std::vector<std::tuple<std::string, bool, std::string>> out;
    for (const auto& c : selftest(level).checks) out.emplace_back(c.name, c.pass, c.detail);
    return out;
  }, py::arg("level") = "quick");

  m.attr("CSV_HEADER") = kCsvHeader;
  m.attr("__version__") = "0.1.0";
}
