// cwave - similarity scaling analysis of 1-D nonlinear evolution equations,
// closed-form compacton/KAK solutions, K(n,m) simulation and the compacton
// multiresolution frame. Batch subcommands with file outputs and a manifest
// per output directory.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cwave/equation.hpp"
#include "cwave/frame.hpp"
#include "cwave/io.hpp"
#include "cwave/similarity.hpp"
#include "cwave/simulate.hpp"
#include "cwave/version.hpp"
#include "cwave/waves.hpp"

using namespace cwave;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitParse = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitBlowup = 4;

constexpr double kPi = 3.14159265358979323846;

Bindings parse_params(const std::vector<std::string>& kvs) {
  Bindings b;
  for (const auto& kv : kvs) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--param expects name=value, got '" + kv + "'");
    b[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
  }
  return b;
}

EquationAST parse_eq_arg(const std::string& text, const Bindings& params) {
  std::set<std::string> declared;
  for (const auto& [k, v] : params) declared.insert(k);
  // aliases may reference eps; leave undeclared symbols symbolic when the
  // user bound nothing
  ParseOptions opts;
  if (!params.empty()) {
    declared.insert("eps");
    declared.insert("csq");
    opts.declared_parameters = declared;
  }
  const auto dsl = alias_to_dsl(text);
  return parse_equation(dsl ? *dsl : text, opts);
}

// range spec lo:hi:count
std::vector<double> parse_range(const std::string& spec) {
  std::vector<double> out;
  double lo = 0, hi = 0;
  int count = 0;
  char c1 = 0, c2 = 0;
  std::istringstream is(spec);
  if (!(is >> lo >> c1 >> hi >> c2 >> count) || c1 != ':' || c2 != ':' || count < 1)
    throw CLI::ValidationError("range expects lo:hi:count, got '" + spec + "'");
  for (int i = 0; i < count; ++i)
    out.push_back(count == 1 ? lo : lo + (hi - lo) * double(i) / double(count - 1));
  return out;
}

std::string out_dir_of(const std::string& emit_path) {
  const std::filesystem::path p(emit_path);
  return p.has_parent_path() ? p.parent_path().string() : ".";
}

json report_to_json(const QualitativeReport& rep) {
  json j;
  if (rep.constant_width_law) {
    json law;
    law["p"] = rep.constant_width_law->p;
    law["alpha"] = rep.constant_width_law->alpha_free ? json(nullptr) : json(1.0);
    law["alpha_free"] = rep.constant_width_law->alpha_free;
    law["beta"] = rep.constant_width_law->beta;
    if (!rep.constant_width_law->alpha_free) {
      law["beta_c0"] = rep.constant_width_law->beta_c0;
      law["beta_c1"] = rep.constant_width_law->beta_c1;
    }
    law["branch"] = branch_string(rep.constant_width_law->branch);
    law["width_at_alpha1"] = rep.constant_width_law->width_at_alpha1;
    j["constant_width_law"] = law;
  } else {
    j["constant_width_law"] = nullptr;
  }
  j["rest_amplitude"] = rep.rest_amplitudes.empty() ? json(nullptr) : json(rep.rest_amplitudes);
  if (rep.bifurcation) {
    json b;
    b["critical_A"] = rep.bifurcation->critical_A;
    b["multiplicity"] = rep.bifurcation->multiplicity;
    b["branch"] = branch_string(rep.bifurcation->branch);
    b["probe_alpha"] = rep.bifurcation->probe_alpha;
    b["probe_p"] = rep.bifurcation->probe_p;
    j["bifurcation"] = b;
  } else {
    j["bifurcation"] = nullptr;
  }
  if (rep.velocity_law) {
    json v;
    v["p"] = rep.velocity_law->p;
    v["alpha"] = rep.velocity_law->alpha_free ? json(nullptr) : json(1.0);
    j["velocity_law"] = v;
  } else {
    j["velocity_law"] = nullptr;
  }
  j["L0"] = rep.L0;
  return j;
}

TravelingWave wave_from_flags(const std::string& family, double A, double V, double lambda,
                              double delta, double vprime, int n) {
  const auto fam = wave_family_from_name(family);
  if (!fam) throw CLI::ValidationError("unknown family '" + family + "'");
  switch (*fam) {
    case WaveFamily::KdVSech2: return TravelingWave::kdv_soliton(A);
    case WaveFamily::MKdVSech: return TravelingWave::mkdv_soliton(A);
    case WaveFamily::MKdVExotic: return TravelingWave::mkdv_exotic(A / std::sqrt(32.0));
    case WaveFamily::K22Compacton: return TravelingWave::k22_compacton(V);
    case WaveFamily::K22KAK: return TravelingWave::k22_kak(V, lambda);
    case WaveFamily::K22OffsetCompacton: return TravelingWave::k22_offset_compacton(A, delta);
    case WaveFamily::K22CompOnKAK:
      return compose_compound(TravelingWave::k22_kak(V, lambda), vprime, delta);
    case WaveFamily::KnnCompacton: return TravelingWave::knn_compacton(n, V);
  }
  throw CLI::ValidationError("unknown family");
}

struct CommonOut {
  std::string emit;
  std::string format = "csv";
  int jobs = 1;
  unsigned long long seed = 0;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"similarity analysis, compacton closed forms, K(n,m) simulation and the "
               "compacton multiresolution frame"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  std::vector<std::string> raw_args(argv, argv + argc);

  // ---- analyze ------------------------------------------------------------
  std::string an_eq;
  std::vector<std::string> an_params;
  bool an_compat = false;
  double an_L0 = 0.70710678118654752;
  CommonOut an_out;
  auto* an = app.add_subcommand("analyze", "similarity relation and qualitative report");
  an->add_option("equation", an_eq, "DSL string or alias (KdV, K22, NLS:3, Knm:n,m, ...)")
      ->required();
  an->add_option("--param", an_params, "parameter binding name=value")->take_all();
  an->add_flag("--paper-compat", an_compat,
               "also emit the published table row where it disagrees");
  an->add_option("--L0", an_L0, "reference half-width for rest-state detection");
  an->add_option("--emit", an_out.emit, "write the JSON report to this path");

  // ---- sweep --------------------------------------------------------------
  std::string sw_eq, sw_A, sw_V, sw_branch;
  std::vector<std::string> sw_params;
  double sw_L0 = 0.70710678118654752;
  CommonOut sw_out;
  int sw_jobs = 1;
  auto* sw = app.add_subcommand("sweep", "width-vs-velocity curve tables");
  sw->add_option("--eq", sw_eq, "equation or alias")->required();
  sw->add_option("--A", sw_A, "amplitude range lo:hi:count")->required();
  sw->add_option("--V", sw_V, "velocity range lo:hi:count")->required();
  sw->add_option("--branch", sw_branch, "restrict to one sign branch, e.g. ++-");
  sw->add_option("--param", sw_params, "parameter binding name=value")->take_all();
  sw->add_option("--L0", sw_L0, "reference half-width emitted in the header comment");
  sw->add_option("--jobs", sw_jobs, "deterministic partition count (outputs merged in order)");
  sw->add_option("--emit", sw_out.emit, "CSV output path")->required();

  // ---- exact --------------------------------------------------------------
  std::string ex_family;
  double ex_A = 1.0, ex_V = 0.75, ex_lambda = 5.0, ex_delta = 0.0, ex_vprime = 0.0;
  int ex_n = 2;
  double ex_x0 = 0, ex_x1 = 0, ex_dx = 0.01, ex_t = 0.0;
  CommonOut ex_out;
  auto* ex = app.add_subcommand("exact", "sample a closed-form traveling solution");
  ex->add_option("--family", ex_family,
                 "kdv-sech2|mkdv-sech|mkdv-exotic|k22-compacton|k22-kak|k22-comp-on-kak|"
                 "k22-offset|knn-compacton")
      ->required();
  ex->add_option("--A", ex_A, "amplitude");
  ex->add_option("--V", ex_V, "velocity");
  ex->add_option("--lambda", ex_lambda, "KAK flat length");
  ex->add_option("--delta", ex_delta, "offset baseline / compound top start");
  ex->add_option("--Vprime", ex_vprime, "compound top speed");
  ex->add_option("--n", ex_n, "K(n,n) order");
  ex->add_option("--x0", ex_x0, "window start (default: support with margin)");
  ex->add_option("--x1", ex_x1, "window end");
  ex->add_option("--dx", ex_dx, "sample spacing");
  ex->add_option("--t", ex_t, "evaluation time");
  ex->add_option("--format", ex_out.format, "csv|json");
  ex->add_option("--emit", ex_out.emit, "profile output path")->required();

  // ---- residual -----------------------------------------------------------
  std::string rs_family, rs_eq;
  double rs_A = 1.0, rs_V = 0.75, rs_lambda = 5.0, rs_delta = 0.0, rs_vprime = 0.0;
  int rs_n = 2, rs_order = 4;
  double rs_dx = 1e-3, rs_t = 0.0;
  std::vector<std::string> rs_params;
  CommonOut rs_out;
  auto* rs = app.add_subcommand("residual", "finite-difference residual of a wave in an equation");
  rs->add_option("--family", rs_family, "wave family (as in exact)")->required();
  rs->add_option("--eq", rs_eq, "equation or alias")->required();
  rs->add_option("--A", rs_A, "amplitude");
  rs->add_option("--V", rs_V, "velocity");
  rs->add_option("--lambda", rs_lambda, "KAK flat length");
  rs->add_option("--delta", rs_delta, "offset / top start");
  rs->add_option("--Vprime", rs_vprime, "compound top speed");
  rs->add_option("--n", rs_n, "K(n,n) order");
  rs->add_option("--dx", rs_dx, "grid spacing");
  rs->add_option("--order", rs_order, "stencil order (2 or 4)");
  rs->add_option("--t", rs_t, "evaluation time");
  rs->add_option("--param", rs_params, "parameter binding name=value")->take_all();
  rs->add_option("--emit", rs_out.emit, "JSON output path");

  // ---- simulate -----------------------------------------------------------
  std::string sim_eq = "K22", sim_init = "compacton:0.75", sim_snap_format = "csv";
  std::vector<std::string> sim_params;
  double sim_domain = 256.0, sim_tend = 50.0, sim_dt = 0.0, sim_mu = -1.0, sim_stride = 0.5;
  double sim_threshold = 0.05, sim_x0 = -1.0;
  std::size_t sim_n = 2048;
  std::string sim_outdir;
  auto* sim = app.add_subcommand("simulate", "method-of-lines run with compacton diagnostics");
  sim->add_option("--eq", sim_eq, "conservation-form equation or alias");
  sim->add_option("--init", sim_init,
                  "compacton:V | stretched:FACTOR[,AMPLITUDE] | two-compactons:V1,V2");
  sim->add_option("--param", sim_params, "parameter binding name=value")->take_all();
  sim->add_option("--domain", sim_domain, "periodic domain length");
  sim->add_option("--N", sim_n, "grid points (power of two)");
  sim->add_option("--tend", sim_tend, "end time");
  sim->add_option("--dt", sim_dt, "time step (0 = auto)");
  sim->add_option("--mu", sim_mu, "hyperviscosity (negative = default)");
  sim->add_option("--stride", sim_stride, "snapshot interval (time units)");
  sim->add_option("--threshold", sim_threshold, "detection threshold");
  sim->add_option("--x0", sim_x0, "initial structure center (default domain/4)");
  sim->add_option("--snap-format", sim_snap_format, "csv|bin");
  sim->add_option("--emit", sim_outdir, "output directory")->required();

  // ---- frame --------------------------------------------------------------
  auto* fr = app.add_subcommand("frame", "multiresolution frame operations");
  fr->require_subcommand(1);

  int fe_k = 0, fe_j = 0;
  double fe_x0 = -1.0, fe_x1 = 3.0, fe_dx = 1e-3;
  std::string fe_emit;
  auto* fr_eval = fr->add_subcommand("eval", "sample one frame element");
  fr_eval->add_option("--k", fe_k)->required();
  fr_eval->add_option("--j", fe_j)->required();
  fr_eval->add_option("--x0", fe_x0);
  fr_eval->add_option("--x1", fe_x1);
  fr_eval->add_option("--dx", fe_dx);
  fr_eval->add_option("--emit", fe_emit, "CSV output path")->required();

  int ts_j = 0, ts_k = 0, ts_grid = 10000;
  auto* fr_two = fr->add_subcommand("two-scale", "two-scale identity defect");
  fr_two->add_option("--j", ts_j);
  fr_two->add_option("--k", ts_k);
  fr_two->add_option("--grid", ts_grid);

  int ch_k = 0, ch_j = 0, ch_jp = 0;
  auto* fr_children = fr->add_subcommand("children", "overlapping fine-scale indices");
  fr_children->add_option("--k", ch_k)->required();
  fr_children->add_option("--j", ch_j)->required();
  fr_children->add_option("--jprime", ch_jp)->required();

  std::string xp_input, xp_emit, xp_recon;
  int xp_jmin = 0, xp_jmax = 3;
  auto* fr_expand = fr->add_subcommand("expand", "project gridded data onto the frame");
  fr_expand->add_option("--input", xp_input, "two-column CSV (x,u)")->required();
  fr_expand->add_option("--jmin", xp_jmin);
  fr_expand->add_option("--jmax", xp_jmax);
  fr_expand->add_option("--emit", xp_emit, "expansion JSON path")->required();
  fr_expand->add_option("--recon", xp_recon, "optional reconstruction CSV path");

  std::string sq_input, sq_emit;
  int sq_samples = 2000;
  auto* fr_square = fr->add_subcommand("square", "pointwise square of an expansion");
  fr_square->add_option("--input", sq_input, "expansion JSON path")->required();
  fr_square->add_option("--samples", sq_samples);
  fr_square->add_option("--emit", sq_emit, "CSV of (x, u^2) samples")->required();

  double mo_alpha = 8.0, mo_x0 = 0.0;
  int mo_n = 1;
  std::string mo_coeffs;
  auto* fr_deriv = fr->add_subcommand("derivative", "multi-scale derivative estimate");
  fr_deriv->add_option("--alpha", mo_alpha);
  fr_deriv->add_option("--x0", mo_x0);
  fr_deriv->add_option("--n", mo_n);
  fr_deriv->add_option("--coeffs", mo_coeffs, "JSON list of {j, k, c}")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    // ---- analyze ----
    if (*an) {
      const auto params = parse_params(an_params);
      const auto ast = parse_eq_arg(an_eq, params);
      const auto rel = build_relation(ast);
      ClassifyOptions copts;
      copts.L0 = an_L0;
      QualitativeReport rep;
      bool classified = true;
      try {
        rep = classify(rel, params, copts);
      } catch (const std::exception&) {
        classified = false;  // unbound symbolic parameters: relation only
      }

      json j;
      j["equation"] = ast.print();
      j["relation"] = relation_string(rel);
      j["solved"] = paper_form(rel);
      const auto val = validate(ast);
      j["capabilities"] = {{"similarity", val.similarity},
                           {"simulate", val.simulate},
                           {"closed_form", val.closed_form ? json(*val.closed_form) : json(nullptr)}};
      if (classified) j["report"] = report_to_json(rep);
      if (an_compat) {
        const auto row = paper_compat_row(ast);
        if (row) {
          j["paper_compat"] = {{"family", row->family},
                               {"engine_relation", row->engine_relation},
                               {"engine_solved", row->engine_solved},
                               {"paper_printed", row->paper_printed},
                               {"note", row->note}};
        } else {
          j["paper_compat"] = nullptr;
        }
      }

      std::cout << "equation:  " << ast.print() << "\n";
      std::cout << "relation:  " << relation_string(rel) << "\n";
      std::cout << "solved:    " << paper_form(rel) << "\n";
      if (classified) {
        if (rep.constant_width_law) {
          std::cout << "constant width: V = alpha*A^" << rep.constant_width_law->p;
          if (!rep.constant_width_law->alpha_free)
            std::cout << " + beta(alpha), beta(1) = " << format_g17(rep.constant_width_law->beta);
          std::cout << (rep.constant_width_law->alpha_free ? " (any alpha)" : "") << "\n";
        }
        if (!rep.rest_amplitudes.empty()) {
          std::cout << "rest amplitudes at L0 = " << format_g17(rep.L0) << ":";
          for (double a : rep.rest_amplitudes) std::cout << " " << format_g17(a);
          std::cout << "\n";
        }
        if (rep.bifurcation)
          std::cout << "bifurcation: critical A = " << format_g17(rep.bifurcation->critical_A)
                    << " (double root along V = " << rep.bifurcation->probe_alpha << "*A)\n";
      }
      if (an_compat && j.contains("paper_compat") && !j["paper_compat"].is_null()) {
        std::cout << "published row [" << j["paper_compat"]["family"].get<std::string>()
                  << "]: " << j["paper_compat"]["paper_printed"].get<std::string>() << "\n"
                  << "engine row:    " << j["paper_compat"]["engine_solved"].get<std::string>()
                  << "\n";
      }

      if (!an_out.emit.empty()) {
        write_text_file(an_out.emit, j.dump(2) + "\n");
        write_manifest(out_dir_of(an_out.emit), "analyze", raw_args,
                       {{"equation", fnv1a64_hex(ast.print())}}, {an_out.emit});
      }
      return 0;
    }

    // ---- sweep ----
    if (*sw) {
      const auto params = parse_params(sw_params);
      const auto ast = parse_eq_arg(sw_eq, params);
      const auto rel = build_relation(ast);
      const auto A_list = parse_range(sw_A);
      const auto V_spec = parse_range(sw_V);
      const double v_lo = V_spec.front(), v_hi = V_spec.back();
      const int v_samples = static_cast<int>(V_spec.size());
      std::optional<Branch> branch;
      if (!sw_branch.empty()) branch = parse_branch(sw_branch, rel.slot_count);

      // deterministic partition over amplitudes, merged in index order
      CurveTable table;
      const int jobs = std::max(1, sw_jobs);
      std::vector<CurveTable> parts(jobs);
      for (int w = 0; w < jobs; ++w) {
        std::vector<double> mine;
        for (std::size_t i = w; i < A_list.size(); i += jobs) mine.push_back(A_list[i]);
        parts[w] = sweep(rel, mine, v_lo, v_hi, v_samples, params, branch);
      }
      std::map<double, std::vector<CurvePoint>> by_amp;
      for (auto& part : parts)
        for (auto& pt : part.points) by_amp[pt.A].push_back(pt);
      for (double a : A_list)
        for (auto& pt : by_amp[a]) table.points.push_back(pt);

      write_text_file(sw_out.emit, table.to_csv());
      write_manifest(out_dir_of(sw_out.emit), "sweep", raw_args,
                     {{"equation", fnv1a64_hex(ast.print())}}, {sw_out.emit});
      std::cout << "wrote " << table.points.size() << " rows to " << sw_out.emit << "\n";
      return 0;
    }

    // ---- exact ----
    if (*ex) {
      const auto w =
          wave_from_flags(ex_family, ex_A, ex_V, ex_lambda, ex_delta, ex_vprime, ex_n);
      double x0 = ex_x0, x1 = ex_x1;
      if (x0 == 0.0 && x1 == 0.0) {
        if (const auto s = w.support()) {
          x0 = s->first + w.velocity * ex_t - 2.0;
          x1 = s->second + w.velocity * ex_t + 2.0;
        } else {
          x0 = w.velocity * ex_t - 20.0;
          x1 = w.velocity * ex_t + 20.0;
        }
      }
      std::vector<double> xs, us;
      for (double x = x0; x <= x1 + 1e-12; x += ex_dx) {
        xs.push_back(x);
        us.push_back(w.eval(x, ex_t));
      }
      if (ex_out.format == "json") {
        json j = json::parse(w.to_json());
        j["t"] = ex_t;
        j["x"] = xs;
        j["u"] = us;
        write_text_file(ex_out.emit, j.dump(2) + "\n");
      } else {
        write_text_file(ex_out.emit, profile_csv(xs, us));
      }
      write_manifest(out_dir_of(ex_out.emit), "exact", raw_args,
                     {{"descriptor", fnv1a64_hex(w.to_json())}}, {ex_out.emit});
      std::cout << "wrote " << xs.size() << " samples to " << ex_out.emit << "\n";
      return 0;
    }

    // ---- residual ----
    if (*rs) {
      const auto params = parse_params(rs_params);
      const auto ast = parse_eq_arg(rs_eq, params);
      const auto w =
          wave_from_flags(rs_family, rs_A, rs_V, rs_lambda, rs_delta, rs_vprime, rs_n);
      const auto rep = residual(w, ast, rs_dx, rs_order, rs_t, params);
      json j;
      j["family"] = rs_family;
      j["equation"] = ast.print();
      j["dx"] = rep.dx;
      j["order"] = rep.order;
      j["max_abs"] = rep.max_abs;
      j["interior_max_abs"] = rep.interior_max_abs;
      j["n_points"] = rep.n_points;
      j["n_interior"] = rep.n_interior;
      std::cout << j.dump(2) << "\n";
      if (!rs_out.emit.empty()) {
        write_text_file(rs_out.emit, j.dump(2) + "\n");
        write_manifest(out_dir_of(rs_out.emit), "residual", raw_args,
                       {{"equation", fnv1a64_hex(ast.print())}}, {rs_out.emit});
      }
      return 0;
    }

    // ---- simulate ----
    if (*sim) {
      const auto params = parse_params(sim_params);
      const auto ast = parse_eq_arg(sim_eq, params);
      const auto flux = to_conservation_form(ast, params);
      if (!flux) {
        std::cerr << "error: not a conservation-form K(n,m)-type equation\n";
        return kExitNumeric;
      }
      SimConfig cfg;
      cfg.domain_length = sim_domain;
      cfg.n_points = sim_n;
      cfg.t_end = sim_tend;
      cfg.dt = sim_dt;
      cfg.hyperviscosity = sim_mu;
      cfg.snapshot_interval = sim_stride;
      cfg.detect_threshold = sim_threshold;
      cfg.flux = *flux;
      const double x0 = sim_x0 > 0 ? sim_x0 : sim_domain / 4.0;

      std::vector<double> u0;
      const auto colon = sim_init.find(':');
      const std::string kind = sim_init.substr(0, colon);
      const std::string arg = colon == std::string::npos ? "" : sim_init.substr(colon + 1);
      if (kind == "compacton") {
        u0 = sample_compacton(cfg, arg.empty() ? 0.75 : std::stod(arg), x0);
      } else if (kind == "stretched") {
        double factor = 3.0, amp = 1.0;
        if (!arg.empty()) {
          const auto comma = arg.find(',');
          factor = std::stod(arg.substr(0, comma));
          if (comma != std::string::npos) amp = std::stod(arg.substr(comma + 1));
        }
        u0 = sample_stretched_bump(cfg, amp, factor, x0);
      } else if (kind == "two-compactons") {
        const auto comma = arg.find(',');
        if (comma == std::string::npos)
          throw CLI::ValidationError("two-compactons:V1,V2");
        const double v1 = std::stod(arg.substr(0, comma));
        const double v2 = std::stod(arg.substr(comma + 1));
        u0 = sample_compacton(cfg, v1, x0);
        const auto second = sample_compacton(cfg, v2, x0 + 8.0 * kPi);
        for (std::size_t i = 0; i < u0.size(); ++i) u0[i] += second[i];
      } else {
        throw CLI::ValidationError("unknown --init kind '" + kind + "'");
      }

      const auto trace = run(u0, cfg);
      const std::string snap_path =
          (std::filesystem::path(sim_outdir) /
           (sim_snap_format == "bin" ? "snapshots.bin" : "snapshots.csv"))
              .string();
      const std::string diag_path =
          (std::filesystem::path(sim_outdir) / "diagnostics.json").string();
      write_text_file(snap_path, sim_snap_format == "bin" ? snapshots_binary(trace)
                                                          : snapshots_csv(trace));
      write_text_file(diag_path, diagnostics_json(trace) + "\n");
      write_manifest(sim_outdir, "simulate", raw_args,
                     {{"equation", fnv1a64_hex(ast.print())}}, {snap_path, diag_path},
                     trace.blew_up);
      if (trace.blew_up) {
        std::cerr << "blow-up at t = " << format_g17(trace.blowup_time) << ": "
                  << trace.blowup_note << "\n";
        return kExitBlowup;
      }
      std::cout << "completed t = " << format_g17(trace.snapshots.back().t)
                << ", mass drift = " << format_g17(trace.max_rel_mass_drift) << ", "
                << trace.inventories.back().items.size() << " detected pulses\n";
      return 0;
    }

    // ---- frame ----
    if (*fr) {
      if (*fr_eval) {
        std::vector<double> xs, us;
        for (double x = fe_x0; x <= fe_x1 + 1e-12; x += fe_dx) {
          xs.push_back(x);
          us.push_back(eta_eval({fe_k, fe_j}, x));
        }
        write_text_file(fe_emit, profile_csv(xs, us));
        write_manifest(out_dir_of(fe_emit), "frame eval", raw_args, {}, {fe_emit});
        std::cout << "wrote " << xs.size() << " samples to " << fe_emit << "\n";
      } else if (*fr_two) {
        std::cout << format_g17(two_scale_check(ts_j, ts_k, ts_grid)) << "\n";
      } else if (*fr_children) {
        const auto kids = children(ch_k, ch_j, ch_jp);
        for (std::size_t i = 0; i < kids.size(); ++i)
          std::cout << kids[i] << (i + 1 < kids.size() ? ' ' : '\n');
      } else if (*fr_expand) {
        const auto text = read_text_file(xp_input);
        std::istringstream is(text);
        std::string line;
        std::vector<std::pair<double, double>> smp;
        while (std::getline(is, line)) {
          if (line.empty() || line[0] == 'x' || line[0] == '#') continue;
          const auto comma = line.find(',');
          if (comma == std::string::npos) continue;
          smp.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
        }
        if (smp.size() < 2) throw std::runtime_error("expand needs at least two samples");
        auto interp = [&smp](double x) {
          if (x <= smp.front().first) return smp.front().second;
          if (x >= smp.back().first) return smp.back().second;
          std::size_t lo = 0, hi = smp.size() - 1;
          while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            (smp[mid].first <= x ? lo : hi) = mid;
          }
          const double w =
              (x - smp[lo].first) / std::max(1e-300, smp[hi].first - smp[lo].first);
          return (1.0 - w) * smp[lo].second + w * smp[hi].second;
        };
        const auto res = expand(interp, smp.front().first, smp.back().first, xp_jmin, xp_jmax);
        write_text_file(xp_emit, res.expansion.to_json() + "\n");
        std::vector<std::string> outputs = {xp_emit};
        if (!xp_recon.empty()) {
          std::vector<double> xs, us;
          for (const auto& [x, _] : smp) {
            xs.push_back(x);
            us.push_back(res.expansion.eval(x));
          }
          write_text_file(xp_recon, profile_csv(xs, us));
          outputs.push_back(xp_recon);
        }
        write_manifest(out_dir_of(xp_emit), "frame expand", raw_args,
                       {{"input", fnv1a64_hex(text)}}, outputs);
        std::cout << "L2 reconstruction error: " << format_g17(res.l2_error) << " ("
                  << res.sweeps << " sweeps)\n";
      } else if (*fr_square) {
        const auto text = read_text_file(sq_input);
        const auto e = FrameExpansion::from_json(text);
        const auto sq = square_expand(e);
        double lo = 1e300, hi = -1e300;
        for (const auto& [kj, c] : e.coeffs) {
          const auto s = FrameElement{kj.first, kj.second}.support();
          lo = std::min(lo, s.first);
          hi = std::max(hi, s.second);
        }
        std::vector<double> xs, us;
        for (int i = 0; i <= sq_samples; ++i) {
          const double x = lo + (hi - lo) * double(i) / sq_samples;
          xs.push_back(x);
          us.push_back(sq.eval(x));
        }
        write_text_file(sq_emit, profile_csv(xs, us));
        write_manifest(out_dir_of(sq_emit), "frame square", raw_args,
                       {{"input", fnv1a64_hex(text)}}, {sq_emit});
        std::cout << sq.terms.size() << " product terms\n";
      } else if (*fr_deriv) {
        MorletParams p;
        p.alpha = mo_alpha;
        for (const auto& item : json::parse(mo_coeffs))
          p.coeffs[{item.at("j").get<int>(), item.at("k").get<int>()}] =
              item.at("c").get<double>();
        const auto est = derivative_estimate(p, mo_x0, mo_n);
        json j;
        j["multi_scale"] = est.multi_scale;
        j["dominant_scale"] = est.dominant_scale;
        j["dominant_j"] = est.dominant_j;
        std::cout << j.dump(2) << "\n";
      }
      return 0;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    const std::string what = e.what();
    std::cerr << "error: " << what << "\n";
    return what.find("blow-up") != std::string::npos ? kExitBlowup : kExitNumeric;
  }
  return 0;
}
