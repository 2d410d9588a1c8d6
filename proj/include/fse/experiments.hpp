#pragma once

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "fse/blowup.hpp"
#include "fse/config.hpp"
#include "fse/csv.hpp"
#include "fse/standing_wave.hpp"

namespace fse {

// Experiment orchestration: builds the datum/grid/solver from a validated
// config, runs the requested experiment and writes manifest.json, the CSV
// artifacts and a gnuplot script into the output directory.

inline InitialDatum datum_from_config(const ExperimentConfig& c) {
  const complex A(c.amplitude_re, c.amplitude_im);
  RegularPart reg = c.family == "gaussian_packet"
                        ? RegularPart::gaussian_packet(A, c.width, c.center_frequency)
                        : RegularPart::gaussian(A, c.width);
  return make_datum(std::move(reg), c.model());
}

inline SpectralGrid grid_from_config(const ExperimentConfig& c, const InitialDatum& d,
                                     double resolve_time) {
  GridSpec spec;
  spec.k_core = c.k_core;
  spec.tol = c.grid_tol;
  spec.resolve_time = resolve_time;
  spec.k_osc = c.k_osc > 0.0 ? c.k_osc
                             : std::max(8.0, d.regular.gaussian_k_cut() + 2.0);
  return build_grid(d.params, spec);
}

inline SolveOptions solver_from_config(const ExperimentConfig& c) {
  SolveOptions o;
  o.solver = c.solver == "newton" ? SolveOptions::Solver::newton
                                  : SolveOptions::Solver::fixed_point;
  o.tol = c.tol;
  o.max_iter = c.max_iter;
  o.damping = c.damping;
  o.blow_up_threshold = c.blow_up_threshold;
  return o;
}

namespace detail {

inline void dump_grid_calibration(const SpectralGrid& g, const std::string& path) {
  CsvWriter csv(path);
  csv.header({"K_max", "nodes", "target", "achieved_error"});
  csv.field(g.K_max).field(static_cast<int>(g.size())).field(g.tol).field(g.calib_error);
  csv.endrow();
}

inline void write_manifest(const std::filesystem::path& dir, const ExperimentConfig& c,
                           const nlohmann::json& extra, double wall_seconds) {
  nlohmann::json m;
  m["tool"] = "fse-lab";
  m["version"] = kVersion;
  m["config"] = to_json(c);
  m["wall_time_seconds"] = wall_seconds;
  m["results"] = extra;
  std::ofstream out(dir / "manifest.json");
  out << m.dump(2) << '\n';
}

inline const char* outcome_name(Outcome o) { return to_string(o); }

inline std::string classification_name(Criticality c) {
  switch (c) {
    case Criticality::subcritical_negative: return "subcritical_negative";
    case Criticality::critical_zero: return "critical_zero";
    default: return "supercritical_positive";
  }
}

inline void write_plot_script(const std::filesystem::path& dir, const std::string& kind) {
  std::ofstream gp(dir / "plot.gp");
  gp << "# gnuplot script; run from this directory:  gnuplot plot.gp\n"
        "set datafile separator ','\n"
        "set key autotitle columnhead\n"
        "set terminal pngcairo size 1200,800\n";
  if (kind == "evolve") {
    gp << "set output 'charge.png'\n"
          "set xlabel 't'\n"
          "plot 'trajectory.csv' using 1:4 with lines title '|q(t)|'\n"
          "set output 'conservation.png'\n"
          "plot 'observables.csv' using 1:2 with lines title 'M(t)', \\\n"
          "     'observables.csv' using 1:3 with lines title 'E(t)'\n"
          "set output 'inertia.png'\n"
          "plot 'observables.csv' using 1:4 with lines title 'I(t)', \\\n"
          "     'observables.csv' using 1:5 with lines title 'dI/dt'\n"
          "set output 'virial.png'\n"
          "plot 'observables.csv' using 1:8 with lines title 'virial residual'\n"
          "set output 'psi_heatmap.png'\n"
          "set view map\n"
          "set xlabel 'x'\nset ylabel 't'\n"
          "splot 'psi_xt.csv' using 2:1:3 with points pt 5 ps 1 palette title '|psi(t,x)|'\n";
  } else if (kind == "convergence") {
    gp << "set output 'convergence.png'\n"
          "set logscale xy\n"
          "plot 'convergence.csv' using 1:4 with linespoints title 'error'\n";
  } else if (kind == "standing-wave") {
    gp << "set output 'standing_waves.png'\n"
          "set logscale x\n"
          "plot 'standing_waves.csv' using 1:2 with linespoints title 'E closed form'\n";
  } else if (kind == "blowup-scan") {
    gp << "set output 'blowup_scan.png'\n"
          "plot 'blowup_scan.csv' using 4:5 with points pt 7 title 'E0 vs nu'\n";
  } else {
    gp << "set output 'green_check.png'\n"
          "plot 'green_check.csv' using 1:3 with points pt 7 title 'jump value'\n";
  }
}

inline nlohmann::json run_evolve(const ExperimentConfig& c, const std::filesystem::path& dir) {
  auto d = datum_from_config(c);
  SpectralGrid grid = grid_from_config(c, d, c.T_final);
  dump_grid_calibration(grid, (dir / "grid_calibration.csv").string());
  TimeGrid tg = TimeGrid::from_final_time(c.T_final, c.h);
  ForcingTable table = build_forcing_table(d, tg);
  auto traj = solve_charge(d, tg, solver_from_config(c), &table);

  {
    CsvWriter csv((dir / "trajectory.csv").string());
    csv.header({"t", "re_q", "im_q", "abs_q", "re_r", "im_r", "residual_raw"});
    for (int n = 0; n <= traj.n_last; ++n) {
      csv.field(tg.t(n))
          .field(traj.q[n].real())
          .field(traj.q[n].imag())
          .field(std::abs(traj.q[n]))
          .field(traj.r[n].real())
          .field(traj.r[n].imag())
          .field(traj.residual_raw.empty() ? 0.0 : traj.residual_raw[n]);
      csv.endrow();
    }
  }

  ObserveOptions oopt;
  oopt.stride = c.observable_stride;
  oopt.jump_every = c.jump_every;
  auto series = observe(d, traj, grid, oopt);
  {
    CsvWriter csv((dir / "observables.csv").string());
    csv.header({"t", "mass", "energy", "inertia", "inertia_dot", "iddot_fd", "iddot_theory",
                "virial_residual", "jump_residual"});
    for (std::size_t i = 0; i < series.t.size(); ++i) {
      double virial = std::numeric_limits<double>::quiet_NaN();
      if (i > 0 && i + 1 < series.t.size()) {
        const double dt = series.t[i + 1] - series.t[i];
        const double fd =
            (series.inertia[i + 1] - 2.0 * series.inertia[i] + series.inertia[i - 1]) /
            (dt * dt);
        virial = std::abs(fd - series.iddot_theory[i]);
      }
      csv.field(series.t[i])
          .field(series.mass[i])
          .field(series.energy[i])
          .field(series.inertia[i])
          .field(series.inertia_dot[i])
          .field(series.iddot_fd[i])
          .field(series.iddot_theory[i])
          .field(virial)
          .field(series.jump_residual[i]);
      csv.endrow();
    }
  }

  // snapshots and the |ψ(t,x)| sheet
  std::vector<double> xs(c.x_count);
  for (int i = 0; i < c.x_count; ++i)
    xs[i] = -c.x_max + 2.0 * c.x_max * i / (c.x_count - 1);
  std::vector<int> snap_nodes;
  for (double ts : c.snapshot_times) {
    const int n = static_cast<int>(std::llround(ts / tg.h));
    if (n >= 0 && n <= traj.n_last) snap_nodes.push_back(n);
  }
  CsvWriter sheet((dir / "psi_xt.csv").string());
  sheet.header({"t", "x", "abs_psi"});
  WaveEvolution w(d, traj, grid);
  int snap_index = 0;
  for (int n : snap_nodes) {
    w.advance_to(n);
    {
      CsvWriter csv((dir / ("psi_hat_" + std::to_string(snap_index) + ".csv")).string());
      csv.header({"k", "re_psi_hat", "im_psi_hat"});
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const complex v = w.psi_hat(i);
        csv.field(grid.k[i]).field(v.real()).field(v.imag());
        csv.endrow();
      }
    }
    {
      CsvWriter csv((dir / ("psi_x_" + std::to_string(snap_index) + ".csv")).string());
      csv.header({"x", "re_psi", "im_psi", "abs_psi"});
      for (double x : xs) {
        const complex v = w.psi_at(x);
        csv.field(x).field(v.real()).field(v.imag()).field(std::abs(v));
        csv.endrow();
        sheet.field(tg.t(n)).field(x).field(std::abs(v));
        sheet.endrow();
      }
    }
    ++snap_index;
  }

  nlohmann::json res;
  res["status"] = traj.status == RunStatus::completed
                      ? "completed"
                      : (traj.status == RunStatus::blow_up ? "blow_up" : "stalled");
  res["t_star"] = traj.t_star;
  res["nodes_accepted"] = traj.n_last + 1;
  res["max_mass_drift"] = series.max_mass_drift();
  res["max_energy_drift"] = series.max_energy_drift();
  res["virial_residual_max"] = series.virial_residual();
  res["E0"] = series.E0;
  res["mass0"] = series.mass0;
  return res;
}

inline nlohmann::json run_standing(const ExperimentConfig& c,
                                   const std::filesystem::path& dir) {
  CsvWriter csv((dir / "standing_waves.csv").string());
  csv.header({"omega", "E_closed_form", "E_quadrature", "classification",
              "dynamic_residual"});
  nlohmann::json res = nlohmann::json::array();
  auto run_one = [&](const StandingWave& w) {
    SpectralGrid grid = build_grid(w.params.with_lambda(w.omega));
    const double e_closed = standing_energy(w);
    const double e_quad = standing_energy_quadrature(w, grid);
    const std::string cls = classification_name(classify(w));
    const auto rep = stationarity_residual(w, c.h, c.periods);
    csv.field(w.omega).field(e_closed).field(e_quad).field(cls).field(rep.dynamic_residual);
    csv.endrow();
    std::cout << "standing-wave omega=" << w.omega << "  E=" << e_closed << "  " << cls
              << "  dynamic_residual=" << rep.dynamic_residual << '\n';
    res.push_back({{"omega", w.omega},
                   {"E_closed_form", e_closed},
                   {"E_quadrature", e_quad},
                   {"classification", cls},
                   {"pointwise_residual", rep.pointwise_residual},
                   {"jump_residual", rep.jump_residual},
                   {"dynamic_residual", rep.dynamic_residual}});
  };
  const ModelParams p = c.model();
  if (p.sigma == 0.0) {
    run_one(build_linear_bound_state(p, std::abs(complex(c.amplitude_re, c.amplitude_im))));
  } else {
    for (double omega : c.omega_list) run_one(build_standing_wave(omega, p));
  }
  return res;
}

inline nlohmann::json run_blowup_scan(const ExperimentConfig& c,
                                      const std::filesystem::path& dir) {
  const ModelParams p = c.model();
  std::vector<SweepPoint> pts;
  for (double nu : c.nu_list)
    pts.push_back({p, std::abs(complex(c.amplitude_re, c.amplitude_im)), c.width, nu});
  RegimeOptions opt;
  opt.h = c.h;
  opt.horizon = c.horizon;
  auto reports = sweep(pts, opt);

  const double Cs = gn_constant_estimate(p);
  const double Cbeta = p.beta != 0.0 ? critical_mass(p, Cs)
                                     : std::numeric_limits<double>::quiet_NaN();
  CsvWriter csv((dir / "blowup_scan.csv").string());
  csv.header({"s", "beta", "sigma", "nu", "E0", "mass0", "outcome", "t_star_threshold",
              "t_star_virial"});
  nlohmann::json res = nlohmann::json::array();
  for (const auto& r : reports) {
    csv.field(r.s)
        .field(r.beta)
        .field(r.sigma)
        .field(r.nu)
        .field(r.E0)
        .field(r.mass0)
        .field(outcome_name(r.outcome))
        .field(r.t_star_threshold)
        .field(r.t_star_virial);
    csv.endrow();
    std::cout << "blowup-scan nu=" << r.nu << "  E0=" << r.E0 << "  regime=" << r.regime
              << "  outcome=" << outcome_name(r.outcome) << '\n';
    res.push_back({{"nu", r.nu},
                   {"regime", r.regime},
                   {"E0", r.E0},
                   {"mass0", r.mass0},
                   {"outcome", outcome_name(r.outcome)},
                   {"t_star_threshold", r.t_star_threshold},
                   {"t_star_virial", r.t_star_virial}});
  }
  return nlohmann::json{{"gn_constant_lower_bound", Cs},
                        {"critical_mass", Cbeta},
                        {"sigma_c", p.sigma_c()},
                        {"runs", res}};
}

inline nlohmann::json run_green_check(const ExperimentConfig& c,
                                      const std::filesystem::path& dir) {
  CsvWriter csv((dir / "green_check.csv").string());
  csv.header({"s", "lambda", "jump", "jump_err", "form_residual", "g0_rel_err", "pass"});
  bool all_pass = true;
  for (double s : c.s_list) {
    for (double lambda : c.lambda_list) {
      ModelParams p(s, c.beta, c.sigma, lambda);
      SpectralGrid grid = build_grid(p);
      const double jump = green_jump_check(p, grid);
      const double jump_err = std::abs(jump + 1.0);
      const double form = green_form_identity_check(p, grid);
      const double g0 = kernels::green_at_origin(p);
      const double g0_quad =
          grid.integrate([&](double k) { return kernels::green_hat(k, p); }) /
          std::sqrt(2.0 * M_PI);
      const double g0_err = std::abs(g0_quad - g0) / g0;
      const bool pass = jump_err < 1e-4 && form < 1e-8 * g0 && g0_err < 1e-8;
      all_pass = all_pass && pass;
      csv.field(s).field(lambda).field(jump).field(jump_err).field(form).field(g0_err).field(
          std::string(pass ? "PASS" : "FAIL"));
      csv.endrow();
      std::cout << (pass ? "PASS" : "FAIL") << "  s=" << s << " lambda=" << lambda
                << "  jump=" << jump << "  form_residual=" << form << '\n';
    }
  }
  CsvWriter ccsv((dir / "constants.csv").string());
  ccsv.header({"s", "re_a", "im_a", "a_route_err", "b_identity_err", "pass"});
  for (double s : c.s_list) {
    const complex a = kernels::const_a_closed(s);
    const double a_err = std::abs(a - kernels::const_a_quadrature(s));
    const complex b = kernels::const_b_closed(s);
    const double b_err = std::abs(b * (2.0 * s - 1.0) + 2.0 * kernels::I * s * a);
    const bool pass = a_err < 1e-6 && b_err < 1e-14;
    all_pass = all_pass && pass;
    ccsv.field(s).field(a.real()).field(a.imag()).field(a_err).field(b_err).field(
        std::string(pass ? "PASS" : "FAIL"));
    ccsv.endrow();
    std::cout << (pass ? "PASS" : "FAIL") << "  s=" << s << "  |a_closed-a_quad|=" << a_err
              << "  |b(2s-1)+2isa|=" << b_err << '\n';
  }
  return nlohmann::json{{"all_pass", all_pass}};
}

inline nlohmann::json run_convergence(const ExperimentConfig& c,
                                      const std::filesystem::path& dir) {
  auto d = datum_from_config(c);
  auto rep = self_convergence(d, c.h_list, c.T_final, solver_from_config(c));
  CsvWriter csv((dir / "convergence.csv").string());
  csv.header({"h", "re_qT", "im_qT", "error", "order"});
  for (std::size_t i = 0; i < rep.h.size(); ++i) {
    csv.field(rep.h[i]).field(rep.q_final[i].real()).field(rep.q_final[i].imag());
    csv.field(i < rep.error.size() ? rep.error[i] : std::numeric_limits<double>::quiet_NaN());
    csv.field(i < rep.order.size() ? rep.order[i] : std::numeric_limits<double>::quiet_NaN());
    csv.endrow();
  }
  nlohmann::json res;
  res["observed_order"] =
      rep.observed_order ? nlohmann::json(*rep.observed_order) : nlohmann::json();
  std::cout << "convergence: observed order "
            << (rep.observed_order ? std::to_string(*rep.observed_order) : "n/a (table only)")
            << '\n';
  return res;
}

}  // namespace detail

// Executes the configured experiment; returns a process exit status.
inline int run_experiment(const ExperimentConfig& c, const std::string& out_dir) {
  namespace fs = std::filesystem;
  const auto t0 = std::chrono::steady_clock::now();
  fs::path dir(out_dir);
  fs::create_directories(dir);
  nlohmann::json results;
  try {
    if (c.experiment == "evolve")
      results = detail::run_evolve(c, dir);
    else if (c.experiment == "standing-wave")
      results = detail::run_standing(c, dir);
    else if (c.experiment == "blowup-scan")
      results = detail::run_blowup_scan(c, dir);
    else if (c.experiment == "green-check")
      results = detail::run_green_check(c, dir);
    else
      results = detail::run_convergence(c, dir);
  } catch (const std::exception& e) {
    std::cerr << "fse-lab: " << c.experiment << " failed: " << e.what() << '\n';
    return 2;
  }
  detail::write_plot_script(dir, c.experiment);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  detail::write_manifest(dir, c, results, wall);
  std::cout << "wrote artifacts to " << dir.string() << '\n';
  return 0;
}

}  // namespace fse
