#include "lpvssa/cli.h"

#include <cmath>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lpvssa/analysis.h"
#include "lpvssa/equivalence.h"
#include "lpvssa/io.h"
#include "lpvssa/reduction.h"
#include "lpvssa/simulation.h"

namespace lpvssa::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

struct Common {
  bool json = false;
  double rank_tol = 0.0;  // 0: environment / default
};

RankOptions rank_options(const Common& common) {
  RankOptions opts = rank_options_from_env();
  if (common.rank_tol > 0.0) opts.absolute_tolerance = common.rank_tol;
  return opts;
}

ordered_json tolerances_json(const RankOptions& rank) {
  ordered_json t;
  if (rank.absolute_tolerance) {
    t["rank"] = *rank.absolute_tolerance;
  } else {
    t["rank"] = "sigma_max * max(rows, cols) * 2^-52";
  }
  t["max_matrix_entries"] = rank.max_entries;
  t["singularity_relative"] = kSingularityTolerance;
  return t;
}

ordered_json header_json(const char* command, const RankOptions& rank) {
  ordered_json j;
  j["tool"] = "lpvssa";
  j["version"] = kVersion;
  j["command"] = command;
  j["tolerances"] = tolerances_json(rank);
  return j;
}

ordered_json vector_json(const Vector& v) {
  ordered_json j = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

ordered_json matrix_rows_json(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    rows.push_back(vector_json(m.row(r).transpose()));
  }
  return rows;
}

ordered_json rank_json(const ObservabilityReport& r) {
  ordered_json j;
  j["rank"] = r.rank.rank;
  j["singular_values"] = vector_json(r.rank.singular_values);
  j["tolerance_used"] = r.rank.tolerance_used;
  j["explicit_matrix"] = r.direct;
  return j;
}

ordered_json rc_json(const RcCertificate& rc) {
  ordered_json j;
  j["convex_ok"] = rc.convex_ok;
  j["dt_invertibility"] = to_string(rc.dt_invertibility);
  j["holds"] = rc.holds();
  if (rc.det_poly_1d) j["det_poly_1d"] = *rc.det_poly_1d;
  if (rc.witness) j["witness"] = vector_json(*rc.witness);
  if (rc.dt_invertibility == DtInvertibility::kHeuristicPass ||
      rc.grid_per_axis > 0) {
    j["grid_per_axis"] = rc.grid_per_axis;
  }
  j["points_checked"] = rc.points_checked;
  return j;
}

std::string poly_text(const std::vector<double>& c) {
  std::ostringstream os;
  os << std::setprecision(12);
  bool first = true;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c[k] == 0.0 && c.size() > 1) continue;
    const double v = c[k];
    if (first) {
      os << v;
    } else {
      os << (v < 0 ? " - " : " + ") << std::abs(v);
    }
    if (k == 1) os << " p";
    if (k > 1) os << " p^" << k;
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

std::string rc_text(const RcCertificate& rc, const LpvSsa& sys) {
  std::ostringstream os;
  os << "RC: " << to_string(rc.dt_invertibility);
  if (rc.det_poly_1d) {
    os << " (det A(p) = " << poly_text(*rc.det_poly_1d) << " on ["
       << sys.region().lower(0) << ", " << sys.region().upper(0) << "])";
  }
  if (rc.dt_invertibility == DtInvertibility::kHeuristicPass) {
    os << " (grid " << rc.grid_per_axis << " per axis plus random points, "
       << rc.points_checked << " points; not a proof)";
  }
  if (rc.witness) {
    os << " (A(p) singular at p = [";
    for (Eigen::Index i = 0; i < rc.witness->size(); ++i) {
      os << (i ? ", " : "") << std::setprecision(17) << (*rc.witness)(i);
    }
    os << "])";
  }
  return os.str();
}

LpvSsa load_system(const std::string& path) {
  try {
    return io::parse_system(io::read_file(path));
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

Signal load_signal(const std::string& path) {
  try {
    return io::parse_signal(io::read_file(path));
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

Vector parse_vector(const std::string& text, int expected) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw InputError("cannot parse '" + item + "' as a number");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos ||
        !std::isfinite(v)) {
      throw InputError("cannot parse '" + item + "' as a number");
    }
    values.push_back(v);
  }
  if (static_cast<int>(values.size()) != expected) {
    throw InputError("--x0 has " + std::to_string(values.size()) +
                     " entries, expected n_x = " + std::to_string(expected));
  }
  return Eigen::Map<Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

// ---------------------------------------------------------------------------

int cmd_check(const std::string& file, int grid, const Common& common,
              std::ostream& out) {
  const LpvSsa sys = load_system(file);
  const RankOptions rank = rank_options(common);
  const auto obs = is_observable(sys, rank);
  const auto reach = is_span_reachable_from_zero(sys, rank);
  const auto rc = check_rc(sys, grid);
  if (common.json) {
    ordered_json j = header_json("check", rank);
    j["system"] = {{"domain", to_string(sys.domain())},
                   {"nx", sys.nx()},
                   {"nu", sys.nu()},
                   {"ny", sys.ny()},
                   {"np", sys.np()}};
    j["observable"] = obs.observable;
    j["observability"] = rank_json(obs);
    j["span_reachable_from_zero"] = reach.observable;
    j["reachability"] = rank_json(reach);
    j["rc"] = rc_json(rc);
    out << j.dump(2) << "\n";
    return kOk;
  }
  out << "system: " << to_string(sys.domain()) << ", n_x = " << sys.nx()
      << ", n_u = " << sys.nu() << ", n_y = " << sys.ny()
      << ", n_p = " << sys.np() << "\n";
  out << "observable: " << (obs.observable ? "yes" : "no") << " (rank "
      << obs.rank.rank << "/" << sys.nx() << ")\n";
  out << "span-reachable: " << (reach.observable ? "yes" : "no") << " (rank "
      << reach.rank.rank << "/" << sys.nx() << ")\n";
  out << rc_text(rc, sys) << "\n";
  return kOk;
}

int cmd_minimize(const std::string& file, const std::string& out_file,
                 std::string sidecar_file, int grid, const Common& common,
                 std::ostream& out) {
  const LpvSsa sys = load_system(file);
  ReductionOptions opts;
  opts.rank = rank_options(common);
  const Minimization m = minimize(sys, opts, grid);
  if (sidecar_file.empty()) {
    const auto dot = out_file.rfind(".json");
    sidecar_file = (dot != std::string::npos && dot + 5 == out_file.size()
                        ? out_file.substr(0, dot)
                        : out_file) +
                   ".transform.json";
  }
  io::write_file(out_file, io::serialize_system(m.result.reduced));
  io::write_file(sidecar_file, io::serialize_sidecar(m));
  if (common.json) {
    ordered_json j = header_json("minimize", opts.rank);
    j["original_order"] = sys.nx();
    j["reduced_order"] = m.result.order;
    j["claim"] = to_string(m.claim);
    j["rc"] = rc_json(m.rc);
    j["output"] = out_file;
    j["sidecar"] = sidecar_file;
    out << j.dump(2) << "\n";
    return kOk;
  }
  out << "reduced order: " << m.result.order << " (from " << sys.nx() << ")\n";
  out << "claim: " << to_string(m.claim) << "\n";
  out << rc_text(m.rc, sys) << "\n";
  out << "wrote " << out_file << " and " << sidecar_file << "\n";
  return kOk;
}

int cmd_iso(const std::string& f1, const std::string& f2, double tol,
            const Common& common, std::ostream& out) {
  const LpvSsa s1 = load_system(f1);
  const LpvSsa s2 = load_system(f2);
  IsoOptions opts;
  opts.tolerance = tol;
  opts.rank = rank_options(common);
  const IsoResult r = find_isomorphism(s1, s2, opts);
  if (common.json) {
    ordered_json j = header_json("iso", opts.rank);
    j["tolerances"]["isomorphism_residual"] = opts.tolerance;
    j["tolerances"]["max_condition"] = opts.max_condition;
    j["verdict"] = to_string(r.verdict);
    j["residual"] = std::isfinite(r.residual) ? ordered_json(r.residual)
                                              : ordered_json(nullptr);
    j["condition"] = std::isfinite(r.condition) ? ordered_json(r.condition)
                                                : ordered_json(nullptr);
    j["transform"] = matrix_rows_json(r.transform);
    if (!r.obstruction.empty()) j["obstruction"] = r.obstruction;
    out << j.dump(2) << "\n";
    return kOk;
  }
  out << "verdict: " << to_string(r.verdict) << "\n";
  if (!r.obstruction.empty()) out << "obstruction: " << r.obstruction << "\n";
  out << "residual: " << std::setprecision(6) << r.residual << "\n";
  if (r.transform.size() > 0) {
    out << "condition: " << r.condition << "\n";
    const Eigen::IOFormat fmt(Eigen::FullPrecision, 0, ", ", "\n", "  [", "]");
    out << "T:\n" << r.transform.format(fmt) << "\n";
  }
  return kOk;
}

struct SimulateArgs {
  std::string file, x0, u_file, p_file, out_file, format = "csv";
  double horizon = 0.0;
  double step = 1e-3;
  bool warn_outside = false;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const LpvSsa sys = load_system(a.file);
  const Vector x0 =
      a.x0.empty() ? Vector::Zero(sys.nx()) : parse_vector(a.x0, sys.nx());
  const Signal p = load_signal(a.p_file);
  if (sys.domain() == TimeDomain::kDiscrete) {
    if (std::round(a.horizon) != a.horizon || a.horizon < 0) {
      throw InputError("DT --horizon must be a nonnegative integer");
    }
    const double entries = (a.horizon + 1.0) * (sys.nx() + sys.ny());
    if (entries > SimulationOptions{}.max_entries) {
      throw ResourceLimitError("DT horizon " + std::to_string(a.horizon) +
                               " exceeds the trajectory size cap");
    }
  }
  Signal u;
  if (!a.u_file.empty()) {
    u = load_signal(a.u_file);
  } else if (sys.domain() == TimeDomain::kDiscrete) {
    u = Signal::ConstantDiscrete(Vector::Zero(sys.nu()),
                                 static_cast<int>(std::round(a.horizon)));
  } else {
    u = Signal::ConstantContinuous(Vector::Zero(sys.nu()), a.horizon);
  }
  SimulationOptions opts;
  if (a.warn_outside) opts.region_policy = RegionPolicy::kWarn;
  Trajectory traj;
  if (sys.domain() == TimeDomain::kDiscrete) {
    traj = simulate_dt(sys, x0, u, p, static_cast<int>(a.horizon), opts);
  } else {
    traj = simulate_ct(sys, x0, u, p, a.horizon, a.step, opts);
  }
  std::string text;
  if (a.format == "json") {
    text = io::trajectory_json(traj);
  } else {
    std::ostringstream os;
    io::write_trajectory_csv(os, traj);
    text = os.str();
  }
  if (a.out_file.empty()) {
    out << text;
  } else {
    io::write_file(a.out_file, text);
  }
  return kOk;
}

struct EquivArgs {
  std::string f1, f2;
  int trials = 20;
  double horizon = 0.0;
  std::uint64_t seed = 0;
  double step = 1e-3;
  double tol = 0.0;
};

int cmd_equiv(const EquivArgs& a, const Common& common, std::ostream& out) {
  const LpvSsa s1 = load_system(a.f1);
  const LpvSsa s2 = load_system(a.f2);
  EquivalenceOptions opts;
  opts.trials = a.trials;
  opts.horizon = a.horizon;
  opts.seed = a.seed;
  opts.step = a.step;
  opts.tolerance = a.tol;
  opts.rank = rank_options(common);
  const EquivalenceReport r = behavior_equivalence_empirical(s1, s2, opts);
  if (common.json) {
    ordered_json j = header_json("equiv", opts.rank);
    j["tolerances"]["equivalence_residual"] = r.tolerance;
    j["horizon"] = r.horizon;
    j["seed"] = a.seed;
    j["pass"] = r.pass;
    j["max_residual"] = r.max_residual;
    ordered_json trials = ordered_json::array();
    for (const auto& t : r.trials) {
      trials.push_back({{"residual_1_to_2", t.residual_1_to_2},
                        {"residual_2_to_1", t.residual_2_to_1}});
    }
    j["trials"] = std::move(trials);
    j["rc1"] = rc_json(r.rc1);
    j["rc2"] = rc_json(r.rc2);
    j["notes"] = r.notes;
    out << j.dump(2) << "\n";
    return kOk;
  }
  out << "behavior equivalence: " << (r.pass ? "pass" : "fail") << "\n";
  out << "trials: " << r.trials.size() << ", horizon: " << r.horizon
      << ", seed: " << a.seed << "\n";
  out << "max residual: " << std::setprecision(6) << r.max_residual
      << " (tolerance " << r.tolerance << ")\n";
  out << "RC system 1: " << to_string(r.rc1.dt_invertibility)
      << (r.rc1.holds() ? "" : " (fails)") << "\n";
  out << "RC system 2: " << to_string(r.rc2.dt_invertibility)
      << (r.rc2.holds() ? "" : " (fails)") << "\n";
  for (const auto& note : r.notes) out << "note: " << note << "\n";
  return kOk;
}

struct RevealArgs {
  std::string file, out_file;
  int trials = 50;
  double window = 3.0;
  std::uint64_t seed = 0;
};

int cmd_reveal(const RevealArgs& a, const Common& common, std::ostream& out) {
  const LpvSsa sys = load_system(a.file);
  LtvWindowOptions opts;
  opts.rank = rank_options(common);
  const RevealSearch s =
      find_revealing_scheduling(sys, a.trials, a.window, a.seed, opts);
  if (s.found && !a.out_file.empty()) {
    io::write_file(a.out_file, io::serialize_signal(s.found->p));
  }
  if (common.json) {
    ordered_json j = header_json("reveal", opts.rank);
    j["found"] = s.found.has_value();
    j["trials_run"] = s.trials_run;
    j["window"] = a.window;
    j["seed"] = a.seed;
    j["diagnostic"] = s.diagnostic;
    if (s.found) {
      j["trial"] = s.found->trial;
      j["scheduling"] = ordered_json::parse(io::serialize_signal(s.found->p));
    }
    out << j.dump(2) << "\n";
    return kOk;
  }
  out << "revealing scheduling: " << (s.found ? "found" : "not found") << "\n";
  out << s.diagnostic << "\n";
  if (s.found && !a.out_file.empty()) out << "wrote " << a.out_file << "\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Realization-theory toolkit for affine LPV state-space systems",
               "lpvssa"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Common common;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_flag("--json", common.json, "Machine-readable output");
    sub->add_option("--rank-tol", common.rank_tol,
                    "Absolute rank tolerance (overrides LPVSSA_RANK_TOL)")
        ->check(CLI::PositiveNumber);
  };

  std::string check_file;
  int grid = 10;
  auto* check = app.add_subcommand("check", "Observability, reachability, RC");
  check->add_option("system", check_file, "System document")->required();
  check->add_option("--grid", grid, "RC grid points per axis (n_p >= 2)")
      ->check(CLI::PositiveNumber);
  add_common(check);

  std::string min_file, min_out, min_sidecar;
  auto* min = app.add_subcommand("minimize", "Observability reduction");
  min->add_option("system", min_file, "System document")->required();
  min->add_option("--out", min_out, "Reduced system document")->required();
  min->add_option("--sidecar", min_sidecar,
                  "Transform sidecar (default: <out>.transform.json)");
  min->add_option("--grid", grid, "RC grid points per axis (n_p >= 2)")
      ->check(CLI::PositiveNumber);
  add_common(min);

  std::string iso_f1, iso_f2;
  double iso_tol = 1e-8;
  auto* iso = app.add_subcommand("iso", "Isomorphism between two systems");
  iso->add_option("system1", iso_f1)->required();
  iso->add_option("system2", iso_f2)->required();
  iso->add_option("--tol", iso_tol, "Residual tolerance")
      ->check(CLI::PositiveNumber);
  add_common(iso);

  SimulateArgs sim_args;
  auto* sim = app.add_subcommand("simulate", "Simulate a trajectory");
  sim->add_option("system", sim_args.file)->required();
  sim->add_option("--x0", sim_args.x0, "Initial state, comma separated");
  sim->add_option("--u", sim_args.u_file, "Input signal (default: zero)");
  sim->add_option("--p", sim_args.p_file, "Scheduling signal")->required();
  sim->add_option("--horizon", sim_args.horizon, "Steps (DT) or end time (CT)")
      ->required();
  sim->add_option("--step", sim_args.step, "CT integration step")
      ->check(CLI::PositiveNumber);
  sim->add_option("--format", sim_args.format)
      ->check(CLI::IsMember({"csv", "json"}));
  sim->add_option("--out", sim_args.out_file, "Output file (default stdout)");
  sim->add_flag("--warn-outside", sim_args.warn_outside,
                "Warn instead of failing on out-of-region scheduling");

  EquivArgs eq_args;
  auto* eq = app.add_subcommand("equiv", "Empirical behavior equivalence");
  eq->add_option("system1", eq_args.f1)->required();
  eq->add_option("system2", eq_args.f2)->required();
  eq->add_option("--trials", eq_args.trials)->check(CLI::PositiveNumber);
  eq->add_option("--horizon", eq_args.horizon,
                 "Steps (DT) or end time (CT); default 20 / 2.0");
  eq->add_option("--seed", eq_args.seed);
  eq->add_option("--step", eq_args.step, "CT integration step")
      ->check(CLI::PositiveNumber);
  eq->add_option("--tol", eq_args.tol, "Pass tolerance; default 1e-6 / 1e-4");
  add_common(eq);

  RevealArgs rv_args;
  auto* rv = app.add_subcommand("reveal", "Search a revealing scheduling");
  rv->add_option("system", rv_args.file)->required();
  rv->add_option("--trials", rv_args.trials)->check(CLI::PositiveNumber);
  rv->add_option("--window", rv_args.window)->check(CLI::PositiveNumber);
  rv->add_option("--seed", rv_args.seed);
  rv->add_option("--out", rv_args.out_file, "Write the found scheduling");
  add_common(rv);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (check->parsed()) return cmd_check(check_file, grid, common, out);
    if (min->parsed()) {
      return cmd_minimize(min_file, min_out, min_sidecar, grid, common, out);
    }
    if (iso->parsed()) return cmd_iso(iso_f1, iso_f2, iso_tol, common, out);
    if (sim->parsed()) return cmd_simulate(sim_args, out);
    if (eq->parsed()) return cmd_equiv(eq_args, common, out);
    if (rv->parsed()) return cmd_reveal(rv_args, common, out);
  } catch (const ResourceLimitError& e) {
    err << "error: " << e.what() << "\n";
    return kResourceLimit;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace lpvssa::cli
