#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cwave/equation.hpp"
#include "cwave/frame.hpp"
#include "cwave/io.hpp"
#include "cwave/similarity.hpp"
#include "cwave/simulate.hpp"
#include "cwave/version.hpp"
#include "cwave/waves.hpp"

namespace py = pybind11;
using namespace cwave;

namespace {

EquationAST parse_helper(const std::string& text,
                         const std::optional<std::set<std::string>>& declared,
                         int max_order) {
  ParseOptions opts;
  opts.declared_parameters = declared;
  opts.max_derivative_order = max_order;
  const auto dsl = alias_to_dsl(text);
  return parse_equation(dsl ? *dsl : text, opts);
}

}  // namespace

PYBIND11_MODULE(_cwave, m) {
  m.doc() = "Similarity scaling analysis, compacton closed forms, K(n,m) simulation "
            "and the compacton multiresolution frame";
  m.attr("__version__") = kVersion;

  // --- equations -----------------------------------------------------------
  py::class_<Atom>(m, "Atom")
      .def_readonly("x_order", &Atom::x_order)
      .def_readonly("t_order", &Atom::t_order)
      .def_readonly("power", &Atom::power);

  py::class_<Term>(m, "Term")
      .def_property_readonly("coefficient", [](const Term& t) { return t.coeff.value(); })
      .def_readonly("symbol", &Term::symbol)
      .def_readonly("atoms", &Term::atoms)
      .def_readonly("outer_x_order", &Term::outer_x_order)
      .def("__repr__", [](const Term& t) { return "<Term " + t.print() + ">"; });

  py::class_<EquationAST>(m, "Equation")
      .def_readonly("terms", &EquationAST::terms)
      .def_readonly("parameters", &EquationAST::parameters)
      .def_readonly("source_text", &EquationAST::source_text)
      .def("print", &EquationAST::print)
      .def("__repr__", [](const EquationAST& e) { return "<Equation " + e.print() + ">"; });

  m.def("parse_equation", &parse_helper, py::arg("text"),
        py::arg("declared_parameters") = std::nullopt, py::arg("max_derivative_order") = 6,
        "Parse a DSL string or a built-in alias (KdV, K22, NLS:3, ...)");

  py::class_<ValidationReport>(m, "ValidationReport")
      .def_readonly("similarity", &ValidationReport::similarity)
      .def_readonly("simulate", &ValidationReport::simulate)
      .def_readonly("closed_form", &ValidationReport::closed_form)
      .def_readonly("warnings", &ValidationReport::warnings);
  m.def("validate", &validate);

  // --- similarity engine ---------------------------------------------------
  py::class_<SimilarityRelation>(m, "SimilarityRelation")
      .def_readonly("slot_count", &SimilarityRelation::slot_count)
      .def("eval",
           [](const SimilarityRelation& r, double A, double V, double L, const std::string& br,
              const Bindings& b) { return r.eval(A, V, L, parse_branch(br, r.slot_count), b); },
           py::arg("A"), py::arg("V"), py::arg("L"), py::arg("branch"),
           py::arg("params") = Bindings{})
      .def("__repr__",
           [](const SimilarityRelation& r) { return "<SimilarityRelation " + relation_string(r) + ">"; });

  m.def("build_relation", &build_relation);
  m.def("relation_string", &relation_string);
  m.def("paper_form", &paper_form);
  m.def("branches", [](const SimilarityRelation& r) {
    std::vector<std::string> out;
    for (const auto& b : dedupe_branches(r)) out.push_back(branch_string(b));
    return out;
  });
  m.def(
      "solve_width",
      [](const SimilarityRelation& r, double A, double V, const std::string& br,
         const Bindings& b) {
        const auto sol = solve_width(r, A, V, parse_branch(br, r.slot_count), b);
        py::dict d;
        d["branch"] = branch_string(sol.branch);
        d["roots"] = sol.roots;
        d["closed_form"] = sol.closed_form ? py::cast(*sol.closed_form) : py::none();
        d["l_independent"] = sol.l_independent;
        d["satisfied"] = sol.satisfied;
        return d;
      },
      py::arg("relation"), py::arg("A"), py::arg("V"), py::arg("branch"),
      py::arg("params") = Bindings{});
  m.def(
      "sweep_csv",
      [](const SimilarityRelation& r, const std::vector<double>& A_list, double v_lo, double v_hi,
         int samples, const Bindings& b) {
        return sweep(r, A_list, v_lo, v_hi, samples, b).to_csv();
      },
      py::arg("relation"), py::arg("amplitudes"), py::arg("v_lo"), py::arg("v_hi"),
      py::arg("samples"), py::arg("params") = Bindings{});
  m.def(
      "classify",
      [](const SimilarityRelation& r, const Bindings& b, double L0) {
        ClassifyOptions opts;
        opts.L0 = L0;
        const auto rep = classify(r, b, opts);
        py::dict d;
        if (rep.constant_width_law) {
          py::dict law;
          law["p"] = rep.constant_width_law->p;
          law["alpha_free"] = rep.constant_width_law->alpha_free;
          law["beta"] = rep.constant_width_law->beta;
          law["branch"] = branch_string(rep.constant_width_law->branch);
          d["constant_width_law"] = law;
        } else {
          d["constant_width_law"] = py::none();
        }
        d["rest_amplitude"] = rep.rest_amplitudes;
        if (rep.bifurcation) {
          py::dict bf;
          bf["critical_A"] = rep.bifurcation->critical_A;
          bf["multiplicity"] = rep.bifurcation->multiplicity;
          d["bifurcation"] = bf;
        } else {
          d["bifurcation"] = py::none();
        }
        d["L0"] = rep.L0;
        return d;
      },
      py::arg("relation"), py::arg("params") = Bindings{},
      py::arg("L0") = 0.70710678118654752);
  m.def("paper_compat", [](const EquationAST& ast) -> py::object {
    const auto row = paper_compat_row(ast);
    if (!row) return py::none();
    py::dict d;
    d["family"] = row->family;
    d["engine_relation"] = row->engine_relation;
    d["engine_solved"] = row->engine_solved;
    d["paper_printed"] = row->paper_printed;
    d["note"] = row->note;
    return d;
  });

  // --- closed forms --------------------------------------------------------
  py::class_<TravelingWave>(m, "TravelingWave")
      .def_readonly("amplitude", &TravelingWave::amplitude)
      .def_readonly("velocity", &TravelingWave::velocity)
      .def_readonly("flat_length", &TravelingWave::flat_length)
      .def_readonly("offset", &TravelingWave::offset)
      .def_readonly("secondary_velocity", &TravelingWave::secondary_velocity)
      .def_readonly("order", &TravelingWave::order)
      .def_property_readonly("family",
                             [](const TravelingWave& w) { return wave_family_name(w.family); })
      .def("__call__", py::vectorize([](TravelingWave& w, double x, double t) {
             return w.eval(x, t);
           }),
           py::arg("x"), py::arg("t") = 0.0)
      .def("eval", &TravelingWave::eval, py::arg("x"), py::arg("t") = 0.0)
      .def("support", &TravelingWave::support)
      .def("junctions", &TravelingWave::junctions, py::arg("t") = 0.0)
      .def("half_width_candidates", &TravelingWave::half_width_candidates)
      .def("validity_end", &TravelingWave::validity_end)
      .def("in_validity_window", &TravelingWave::in_validity_window)
      .def("to_json", &TravelingWave::to_json)
      .def_static("kdv_soliton", &TravelingWave::kdv_soliton, py::arg("A"))
      .def_static("mkdv_soliton", &TravelingWave::mkdv_soliton, py::arg("A"))
      .def_static("mkdv_exotic", &TravelingWave::mkdv_exotic, py::arg("k"))
      .def_static("k22_compacton", &TravelingWave::k22_compacton, py::arg("V"))
      .def_static("k22_kak", &TravelingWave::k22_kak, py::arg("V"), py::arg("lam"))
      .def_static("k22_offset_compacton", &TravelingWave::k22_offset_compacton, py::arg("A"),
                  py::arg("delta"))
      .def_static("knn_compacton", &TravelingWave::knn_compacton, py::arg("n"), py::arg("V"));

  m.def("wave_from_json", &wave_from_json);
  m.def("compose_compound",
        py::overload_cast<const TravelingWave&, double, double>(&compose_compound),
        py::arg("kak"), py::arg("v_prime"), py::arg("delta") = 0.0);

  py::class_<ResidualReport>(m, "ResidualReport")
      .def_readonly("max_abs", &ResidualReport::max_abs)
      .def_readonly("interior_max_abs", &ResidualReport::interior_max_abs)
      .def_readonly("dx", &ResidualReport::dx)
      .def_readonly("order", &ResidualReport::order);
  m.def("residual", &residual, py::arg("wave"), py::arg("equation"), py::arg("dx"),
        py::arg("order") = 4, py::arg("t") = 0.0, py::arg("params") = Bindings{},
        py::arg("window") = std::nullopt);

  // --- simulator -----------------------------------------------------------
  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("domain_length", &SimConfig::domain_length)
      .def_readwrite("n_points", &SimConfig::n_points)
      .def_readwrite("dt", &SimConfig::dt)
      .def_readwrite("t_end", &SimConfig::t_end)
      .def_readwrite("cfl", &SimConfig::cfl)
      .def_readwrite("hyperviscosity", &SimConfig::hyperviscosity)
      .def_readwrite("snapshot_interval", &SimConfig::snapshot_interval)
      .def_readwrite("detect_threshold", &SimConfig::detect_threshold)
      .def("set_equation",
           [](SimConfig& c, const EquationAST& ast, const Bindings& b) {
             const auto ff = to_conservation_form(ast, b);
             if (!ff) throw std::invalid_argument("not a conservation-form equation");
             c.flux = *ff;
           },
           py::arg("equation"), py::arg("params") = Bindings{});

  py::class_<DetectedPulse>(m, "DetectedPulse")
      .def_readonly("amplitude", &DetectedPulse::amplitude)
      .def_readonly("center", &DetectedPulse::center)
      .def_readonly("half_width", &DetectedPulse::half_width)
      .def_readonly("speed", &DetectedPulse::speed)
      .def_readonly("speed_known", &DetectedPulse::speed_known);
  py::class_<CompactonInventory>(m, "CompactonInventory")
      .def_readonly("items", &CompactonInventory::items)
      .def_readonly("overlapping", &CompactonInventory::overlapping);
  py::class_<Snapshot>(m, "Snapshot")
      .def_readonly("t", &Snapshot::t)
      .def_readonly("u", &Snapshot::u);
  py::class_<SimTrace>(m, "SimTrace")
      .def_readonly("snapshots", &SimTrace::snapshots)
      .def_readonly("inventories", &SimTrace::inventories)
      .def_readonly("mass_series", &SimTrace::mass_series)
      .def_readonly("dx", &SimTrace::dx)
      .def_readonly("dt", &SimTrace::dt)
      .def_readonly("blew_up", &SimTrace::blew_up)
      .def_readonly("blowup_time", &SimTrace::blowup_time)
      .def_readonly("max_rel_mass_drift", &SimTrace::max_rel_mass_drift)
      .def("diagnostics_json", [](const SimTrace& t) { return diagnostics_json(t); });

  m.def("run", &run, py::arg("initial"), py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
  m.def("detect_compactons", &detect_compactons, py::arg("u"), py::arg("dx"),
        py::arg("threshold"));
  m.def("cross_correlation_shift", &cross_correlation_shift);
  m.def("sample_compacton", &sample_compacton, py::arg("config"), py::arg("V"), py::arg("x0"));
  m.def("sample_stretched_bump", &sample_stretched_bump, py::arg("config"), py::arg("amplitude"),
        py::arg("width_factor"), py::arg("x0"));

  // --- frame ---------------------------------------------------------------
  py::class_<FrameElement>(m, "FrameElement")
      .def(py::init([](int k, int j) { return FrameElement{k, j}; }), py::arg("k"), py::arg("j"))
      .def_readonly("k", &FrameElement::k)
      .def_readonly("j", &FrameElement::j)
      .def("scale", &FrameElement::scale)
      .def("support", &FrameElement::support);
  m.def("eta_eval", py::vectorize([](int k, int j, double x) {
          return eta_eval(FrameElement{k, j}, x);
        }),
        py::arg("k"), py::arg("j"), py::arg("x"));
  m.def("two_scale_check", &two_scale_check, py::arg("j"), py::arg("k"),
        py::arg("grid_points") = 10000, py::arg("child_shift_steps") = 1);
  m.def("children", &children, py::arg("k"), py::arg("j"), py::arg("j_prime"));
  m.def("partition_check", &partition_check, py::arg("j"), py::arg("x_lo"), py::arg("x_hi"),
        py::arg("grid_points") = 10000);

  py::class_<FrameExpansion>(m, "FrameExpansion")
      .def_readonly("j_min", &FrameExpansion::j_min)
      .def_readonly("j_max", &FrameExpansion::j_max)
      .def_property_readonly("coeffs",
                             [](const FrameExpansion& e) {
                               py::dict d;
                               for (const auto& [kj, c] : e.coeffs)
                                 d[py::make_tuple(kj.first, kj.second)] = c;
                               return d;
                             })
      .def("eval", py::vectorize([](FrameExpansion& e, double x) { return e.eval(x); }))
      .def("to_json", &FrameExpansion::to_json)
      .def_static("from_json", &FrameExpansion::from_json);

  m.def(
      "expand",
      [](const std::function<double(double)>& f, double x_lo, double x_hi, int j_min, int j_max) {
        const auto res = expand(f, x_lo, x_hi, j_min, j_max);
        return py::make_tuple(res.expansion, res.l2_error);
      },
      py::arg("f"), py::arg("x_lo"), py::arg("x_hi"), py::arg("j_min"), py::arg("j_max"));

  py::class_<SquareExpansion>(m, "SquareExpansion")
      .def("eval", py::vectorize([](SquareExpansion& e, double x) { return e.eval(x); }))
      .def("cross_count", &SquareExpansion::cross_count)
      .def_property_readonly("n_terms",
                             [](const SquareExpansion& e) { return e.terms.size(); });
  m.def("square_expand", &square_expand);

  // --- Morlet --------------------------------------------------------------
  m.def("morlet_eval", py::vectorize([](double alpha, double x) { return morlet_eval(alpha, x); }),
        py::arg("alpha"), py::arg("x"));
  py::class_<MorletParams>(m, "MorletParams")
      .def(py::init([](double alpha, const std::map<std::pair<int, int>, double>& coeffs) {
             MorletParams p;
             p.alpha = alpha;
             p.coeffs = coeffs;
             return p;
           }),
           py::arg("alpha"), py::arg("coeffs"))
      .def_readonly("alpha", &MorletParams::alpha)
      .def("half_width", &MorletParams::half_width);
  m.def("morlet_reconstruct", py::vectorize([](MorletParams& p, double x) {
          return morlet_reconstruct(p, x);
        }));
  m.def(
      "derivative_estimate",
      [](const MorletParams& p, double x0, int n) {
        const auto est = derivative_estimate(p, x0, n);
        py::dict d;
        d["multi_scale"] = est.multi_scale;
        d["dominant_scale"] = est.dominant_scale;
        d["dominant_j"] = est.dominant_j;
        return d;
      },
      py::arg("params"), py::arg("x0"), py::arg("n"));
}
