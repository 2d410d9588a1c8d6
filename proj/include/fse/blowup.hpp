#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "fse/charge.hpp"
#include "fse/observables.hpp"

namespace fse {

// Focusing-regime experiments: scaling to negative energy, the critical-mass
// threshold from the fractional Gagliardo-Nirenberg bound, and blow-up
// detection by the Glassey concavity mechanism.

// Dilated datum u_ν(x) = u(νx) restricted to the closed-form family: the
// regular part dilates inside the family, the value at the origin is
// unchanged, and the charge is re-solved.
inline InitialDatum scaled_datum(const InitialDatum& base, double nu) {
  return make_datum(base.regular.dilated(nu, base.params.s), base.params);
}

struct ScalingCheck {
  double seminorm_ratio_error;  // | [u_ν]²/(ν^{2s-1}[u]²) - 1 |
  double energy_law_error;      // |E(u_ν) - (ν^{2s-1}[u]² + β/(σ+1)|u(0)|^{2σ+2})|
  double energy_scaled;         // E(u_ν) by quadrature
};

// Verifies the dilation law E(u(ν·)) = ν^{2s-1}[u]² + β/(σ+1)|u(0)|^{2σ+2} on
// the full datum û (regular + singular parts dilated together).
inline ScalingCheck energy_scaling_check(const InitialDatum& base, double nu,
                                         const SpectralGrid& grid) {
  grid.require_calibrated("energy_scaling_check");
  const double s = base.params.s;
  auto seminorm_sq = [&](auto&& fhat) {
    double acc = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
      acc += grid.w[i] * std::pow(std::abs(grid.k[i]), 2.0 * s) * std::norm(fhat(grid.k[i]));
    return acc;
  };
  const double base_sq = seminorm_sq([&](double k) { return base.psi0_hat(k); });
  const double scaled_sq =
      seminorm_sq([&](double k) { return base.psi0_hat(k / nu) / nu; });
  const double ratio = scaled_sq / (std::pow(nu, 2.0 * s - 1.0) * base_sq);
  ScalingCheck chk{};
  chk.seminorm_ratio_error = std::abs(ratio - 1.0);
  const double pot = base.params.beta / (base.params.sigma + 1.0) *
                     std::pow(std::abs(base.q0), 2.0 * base.params.sigma + 2.0);
  const double law = std::pow(nu, 2.0 * s - 1.0) * base_sq + pot;
  chk.energy_scaled = scaled_sq + pot;
  chk.energy_law_error = std::abs(chk.energy_scaled - law) / (1.0 + std::abs(law));
  return chk;
}

// Gagliardo-Nirenberg ratio ‖f‖_∞ / (‖f‖^{1-1/(2s)} [f]^{1/(2s)}) from the
// three norms.
inline double gn_ratio(double sup_norm, double l2_norm, double seminorm, double s) {
  const double zeta = 1.0 / (2.0 * s);
  return sup_norm / (std::pow(l2_norm, 1.0 - zeta) * std::pow(seminorm, zeta));
}

// Lower bound on the constant C_s of ‖f‖_∞ ≤ C_s ‖f‖^{1-1/(2s)} [f]^{1/(2s)},
// maximized over Gaussians and resolvent profiles (all three norms in closed
// form; the ratio is dilation-invariant, the λ-sweep confirms it numerically).
inline double gn_constant_estimate(const ModelParams& p) {
  const double s = p.s;
  double best = 0.0;
  {  // Gaussian e^{-x²/2}
    const double sup = 1.0;
    const double l2 = std::pow(M_PI, 0.25);
    const double semi = std::sqrt(std::tgamma(s + 0.5));
    best = std::max(best, gn_ratio(sup, l2, semi, s));
  }
  for (double lg = -2.0; lg <= 2.01; lg += 0.5) {  // G_s^λ profiles
    const double lambda = std::pow(10.0, lg);
    const double sup = kernels::green_at_origin(s, lambda);
    const double l2 = std::sqrt(kernels::green_l2_sq(s, lambda));
    const double semi = std::sqrt(kernels::green_kinetic_sq(s, lambda));
    best = std::max(best, gn_ratio(sup, l2, semi, s));
  }
  return best;
}

// C(s, β) = (2s / (|β| C_s^{4s}))^{1/(2(2s-1))}: masses below this bound give
// global solutions at the critical power.
inline double critical_mass(const ModelParams& p, double Cs_estimate) {
  if (!(Cs_estimate > 0.0)) throw std::domain_error("critical_mass: Cs must be positive");
  if (!(p.beta != 0.0)) throw std::domain_error("critical_mass: beta must be nonzero");
  return std::pow(2.0 * p.s / (std::abs(p.beta) * std::pow(Cs_estimate, 4.0 * p.s)),
                  1.0 / (2.0 * (2.0 * p.s - 1.0)));
}

enum class Outcome { global_bounded, blow_up, inconclusive };

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::global_bounded: return "global_bounded";
    case Outcome::blow_up: return "blow_up";
    default: return "inconclusive";
  }
}

struct RegimeReport {
  double s = 0, beta = 0, sigma = 0, nu = 1.0;
  double sigma_c = 0;
  std::string regime;  // defocusing | subcritical | critical | supercritical
  double E0 = 0, mass0 = 0, I0 = 0, Idot0 = 0;
  std::optional<double> critical_mass_estimate;
  Outcome outcome = Outcome::inconclusive;
  double t_star_threshold = std::numeric_limits<double>::quiet_NaN();
  double t_star_virial = std::numeric_limits<double>::quiet_NaN();
};

inline std::string regime_tag(const ModelParams& p) {
  if (p.beta >= 0.0) return "defocusing";
  const double d = p.sigma - p.sigma_c();
  if (std::abs(d) < 1e-12) return "critical";
  return d < 0 ? "subcritical" : "supercritical";
}

// First positive root of I(0) + İ(0) t + 4s²E(0) t²  (the parabola bounding
// I(t) from above when Ï ≤ 8s²E(0) < 0).
inline double virial_parabola_root(double I0, double Idot0, double E0, double s) {
  const double a = 4.0 * s * s * E0;
  if (!(a < 0.0)) return std::numeric_limits<double>::quiet_NaN();
  const double disc = Idot0 * Idot0 - 4.0 * a * I0;
  if (disc < 0.0) return std::numeric_limits<double>::quiet_NaN();
  const double r1 = (-Idot0 + std::sqrt(disc)) / (2.0 * a);
  const double r2 = (-Idot0 - std::sqrt(disc)) / (2.0 * a);
  double best = std::numeric_limits<double>::quiet_NaN();
  for (double r : {r1, r2})
    if (r > 0.0 && (!(best > 0.0) || r < best)) best = r;
  return best;
}

struct RegimeOptions {
  double h = 1.0 / 512.0;
  double horizon = 5.0;            // cap on the run length
  double horizon_virial_factor = 2.2;  // run up to this multiple of t_virial
  double threshold_factor = 1e6;   // blow-up threshold 1e6·|q0|
  double consistency_factor = 2.0; // t* must not exceed this multiple of t_virial
  double bounded_factor = 10.0;    // |q| below this multiple of |q0|: bounded
  ObserveOptions observe;
};

inline RegimeReport run_regime(const InitialDatum& d, const SpectralGrid& grid,
                               const RegimeOptions& opt = {}, double nu = 1.0) {
  const ModelParams& p = d.params;
  RegimeReport rep;
  rep.s = p.s;
  rep.beta = p.beta;
  rep.sigma = p.sigma;
  rep.nu = nu;
  rep.sigma_c = p.sigma_c();
  rep.regime = regime_tag(p);

  {  // initial observables
    TimeGrid tiny(opt.h, 2);
    auto traj0 = solve_charge(d, tiny);
    WaveEvolution w(d, traj0, grid);
    rep.E0 = energy_of(w);
    rep.mass0 = mass_of(w);
    rep.I0 = inertia_of(w);
    rep.Idot0 = inertia_dot_of(w);
  }
  rep.t_star_virial = virial_parabola_root(rep.I0, rep.Idot0, rep.E0, p.s);

  double T = opt.horizon;
  if (rep.t_star_virial > 0.0)
    T = std::min(T, opt.horizon_virial_factor * rep.t_star_virial);
  TimeGrid tg = TimeGrid::from_final_time(T, opt.h);
  SolveOptions sopt;
  sopt.blow_up_threshold = opt.threshold_factor * std::max(std::abs(d.q0), 1e-3);
  auto traj = solve_charge(d, tg, sopt);

  double qmax = 0.0;
  for (const auto& q : traj.q) qmax = std::max(qmax, std::abs(q));

  if (traj.status == RunStatus::blow_up) {
    rep.t_star_threshold = traj.t_star;
    const bool consistent = rep.t_star_virial > 0.0 &&
                            traj.t_star <= opt.consistency_factor * rep.t_star_virial;
    rep.outcome = consistent ? Outcome::blow_up : Outcome::inconclusive;
  } else if (traj.status == RunStatus::completed) {
    rep.outcome = qmax < opt.bounded_factor * std::max(std::abs(d.q0), 1e-6)
                      ? Outcome::global_bounded
                      : Outcome::inconclusive;
  } else {
    rep.outcome = Outcome::inconclusive;
  }
  return rep;
}

struct SweepPoint {
  ModelParams params;
  double amplitude;
  double width;
  double nu;
};

inline std::vector<RegimeReport> sweep(const std::vector<SweepPoint>& points,
                                       const RegimeOptions& opt = {}) {
  std::vector<RegimeReport> out;
  for (const auto& pt : points) {
    auto base = make_datum(RegularPart::gaussian(pt.amplitude, pt.width), pt.params);
    auto d = scaled_datum(base, pt.nu);
    GridSpec spec;
    spec.resolve_time = opt.horizon;
    spec.k_osc = std::max(4.0, d.regular.gaussian_k_cut() + 2.0);
    SpectralGrid grid = build_grid(pt.params, spec);
    out.push_back(run_regime(d, grid, opt, pt.nu));
  }
  return out;
}

}  // namespace fse
