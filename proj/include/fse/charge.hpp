#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fse/abel.hpp"
#include "fse/forcing.hpp"
#include "fse/initial_data.hpp"
#include "fse/kernels.hpp"

namespace fse {

struct TimeGrid {
  double h;  // uniform step
  int N;     // step count; nodes t_n = n h, n = 0..N

  TimeGrid(double h_, int N_) : h(h_), N(N_) {
    if (!(h > 0.0)) throw std::domain_error("TimeGrid: h must be positive");
    if (N < 2) throw std::domain_error("TimeGrid: need at least 2 steps");
  }
  static TimeGrid from_final_time(double T, double h) {
    int N = static_cast<int>(std::llround(T / h));
    if (N < 2) N = 2;
    return TimeGrid(h, N);
  }
  double t(int n) const { return n * h; }
  double T_final() const { return N * h; }
};

struct ForcingTable {
  std::vector<complex> f_tilde;  // f̃ at t_0..t_N
};

inline ForcingTable build_forcing_table(const InitialDatum& d, const TimeGrid& g,
                                        const osc::Options& opt = {}) {
  ForcingTable table;
  table.f_tilde.resize(g.N + 1);
  for (int n = 0; n <= g.N; ++n) table.f_tilde[n] = forcing_regularized(g.t(n), d, opt);
  return table;
}

enum class RunStatus { completed, blow_up, stalled };

struct SolveOptions {
  enum class Solver { fixed_point, newton };
  Solver solver = Solver::fixed_point;
  double damping = 0.5;
  double tol = 1e-12;
  int max_iter = 200;
  // |q| threshold for blow-up detection; 0 selects 1e6 · max(|q0|, 1e-3)
  double blow_up_threshold = 0.0;
  bool record_raw_residual = true;
};

struct ChargeTrajectory {
  TimeGrid grid;
  RunStatus status = RunStatus::completed;
  double t_star = -1.0;  // termination time for blow_up / stalled
  int n_last = 0;        // last accepted node
  std::vector<complex> q;
  std::vector<complex> r;      // r_n = β|q_n|^{2σ} q_n
  std::vector<complex> r_dot;  // second-order finite differences of r
  std::vector<double> residual_raw;

  int nodes() const { return n_last + 1; }
};

namespace detail {

inline complex power_nonlin(complex q, double sigma) {
  if (sigma == 0.0) return q;
  const double a = std::abs(q);
  return a == 0.0 ? complex{} : std::pow(a * a, sigma) * q;
}

// Newton step for x + c·|x|^{2σ}x = F as a 2x2 real system.
inline bool newton_node(complex& x, complex c, complex F, double sigma, double tol,
                        int max_iter) {
  for (int it = 0; it < max_iter; ++it) {
    const complex m = power_nonlin(x, sigma);
    const complex g = x + c * m - F;
    if (std::abs(g) < tol * std::max(1.0, std::abs(x))) return true;
    const double a2 = std::norm(x);
    complex dm_dx, dm_dxbar;
    if (a2 == 0.0) {
      dm_dx = sigma == 0.0 ? 1.0 : 0.0;
      dm_dxbar = 0.0;
    } else {
      const double pw = std::pow(a2, sigma);
      dm_dx = (sigma + 1.0) * pw;
      dm_dxbar = sigma * pw / a2 * x * x;
    }
    const complex alpha = 1.0 + c * dm_dx;
    const complex beta = c * dm_dxbar;
    // dx ↦ alpha dx + beta conj(dx) as a real matrix
    const double J11 = alpha.real() + beta.real(), J12 = -alpha.imag() + beta.imag();
    const double J21 = alpha.imag() + beta.imag(), J22 = alpha.real() - beta.real();
    const double det = J11 * J22 - J12 * J21;
    if (!std::isfinite(det) || std::abs(det) < 1e-300) return false;
    double dx = (g.real() * J22 - g.imag() * J12) / det;
    double dy = (g.imag() * J11 - g.real() * J21) / det;
    const double step = std::hypot(dx, dy);
    const double cap = 10.0 * std::max(1.0, std::abs(x));
    if (step > cap) {
      dx *= cap / step;
      dy *= cap / step;
    }
    x -= complex(dx, dy);
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
  }
  const complex g = x + c * power_nonlin(x, sigma) - F;
  return std::abs(g) < tol * std::max(1.0, std::abs(x));
}

inline bool fixed_point_node(complex& x, complex c, complex F, double sigma, double damping,
                             double tol, int max_iter) {
  for (int it = 0; it < max_iter; ++it) {
    const complex next = (1.0 - damping) * x + damping * (F - c * power_nonlin(x, sigma));
    if (!std::isfinite(next.real()) || !std::isfinite(next.imag())) return false;
    const double delta = std::abs(next - x);
    x = next;
    if (delta < tol * std::max(1.0, std::abs(x))) return true;
  }
  return false;
}

// Distinguishes a vanished solution branch (the physical |q| left through
// infinity inside the step) from a numerical stall: iterate the undamped map
// and test for monotone growth through the blow-up threshold.
inline bool diverges_through_threshold(complex x, complex c, complex F, double sigma,
                                       double threshold) {
  double prev = std::abs(x);
  int growth_streak = 0;
  for (int it = 0; it < 200; ++it) {
    x = F - c * power_nonlin(x, sigma);
    const double mag = std::abs(x);
    if (!std::isfinite(mag)) return growth_streak >= 2;
    growth_streak = mag > 1.02 * prev ? growth_streak + 1 : 0;
    if (mag > threshold && growth_streak >= 3) return true;
    if (growth_streak == 0 && it > 40) return false;
    prev = mag;
  }
  return false;
}

// Quadratic (Simpson-type) product integration of ∫_0^{t_n} g (t_n-τ)^{-ζ} dτ,
// used only as an independent residual quadrature.  Panels are paired from the
// right; an odd leading panel falls back to linear interpolation.
class AbelSimpson {
 public:
  AbelSimpson(double zeta, double h) : zeta_(zeta), hpow_(std::pow(h, 1.0 - zeta)) {}

  complex history(const std::vector<complex>& g, int n) const {
    complex acc{};
    int start = 0;
    if (n % 2 == 1) {  // single linear panel [t_0, t_1]
      const double nu = n;
      const double P = mom(nu, 1.0 - zeta_, 1.0), Q = mom(nu, 2.0 - zeta_, 1.0);
      acc += ((1.0 - nu) * P + Q) * g[0] + (nu * P - Q) * g[1];
      start = 1;
    }
    for (int a = start; a + 2 <= n; a += 2) {
      const double nu = n - a;
      const double P = mom(nu, 1.0 - zeta_, 2.0);
      const double Q = mom(nu, 2.0 - zeta_, 2.0);
      const double R = mom(nu, 3.0 - zeta_, 2.0);
      const double m0 = P, m1 = nu * P - Q, m2 = nu * nu * P - 2.0 * nu * Q + R;
      const double w0 = 0.5 * (m2 - 3.0 * m1 + 2.0 * m0);
      const double w1 = 2.0 * m1 - m2;
      const double w2 = 0.5 * (m2 - m1);
      acc += w0 * g[a] + w1 * g[a + 1] + w2 * g[a + 2];
    }
    return hpow_ * acc;
  }

 private:
  // (nu^p - (nu-width)^p)/p without cancellation
  static double mom(double nu, double p, double width) {
    if (nu == width) return std::pow(nu, p) / p;
    return -std::pow(nu, p) * std::expm1(p * std::log1p(-width / nu)) / p;
  }
  double zeta_, hpow_;
};

}  // namespace detail

// Time-marches the regularized charge equation
//   q(t) = f̃(t) - i a(s) β ∫_0^t (|q|^{2σ}q(τ) - |q₀|^{2σ}q₀) (t-τ)^{-1/(2s)} dτ
// with product-trapezoidal history weights; at each node the scalar complex
// equation is solved by damped fixed point with a Newton fallback.  The raw
// (un-regularized) equation residual is recorded as an a-posteriori check.
inline ChargeTrajectory solve_charge(const InitialDatum& d, const TimeGrid& g,
                                     const SolveOptions& opts = {},
                                     const ForcingTable* table = nullptr) {
  const ModelParams& p = d.params;
  ForcingTable local;
  if (!table) {
    local = build_forcing_table(d, g);
    table = &local;
  }
  if (static_cast<int>(table->f_tilde.size()) != g.N + 1)
    throw std::invalid_argument("solve_charge: forcing table does not match the grid");

  const complex ia_beta = kernels::I * kernels::const_a(p) * p.beta;
  const AbelWeights weights(p.abel_exponent(), g.h, g.N);
  const double threshold = opts.blow_up_threshold > 0.0
                               ? opts.blow_up_threshold
                               : 1e6 * std::max(std::abs(d.q0), 1e-3);

  ChargeTrajectory traj{g};
  traj.q.assign(g.N + 1, complex{});
  traj.q[0] = d.q0;
  std::vector<complex> m(g.N + 1);
  m[0] = detail::power_nonlin(d.q0, p.sigma);
  const complex m0 = m[0];

  int n = 1;
  for (; n <= g.N; ++n) {
    complex hist{};
    for (int j = 0; j < n; ++j) hist += weights.w(n, j) * (m[j] - m0);
    const complex c = ia_beta * weights.diag();
    const complex F = table->f_tilde[n] - ia_beta * hist + c * m0;

    complex x = n >= 2 ? 2.0 * traj.q[n - 1] - traj.q[n - 2] : traj.q[n - 1];
    bool ok = false;
    if (c == complex{}) {
      x = F;  // no implicit part (β = 0)
      ok = true;
    } else if (opts.solver == SolveOptions::Solver::fixed_point) {
      ok = detail::fixed_point_node(x, c, F, p.sigma, opts.damping, opts.tol, opts.max_iter);
      if (!ok) {
        x = traj.q[n - 1];
        ok = detail::newton_node(x, c, F, p.sigma, opts.tol, opts.max_iter);
      }
    } else {
      ok = detail::newton_node(x, c, F, p.sigma, opts.tol, opts.max_iter);
    }
    if (!ok) {
      // no bounded root reachable: blow-up if the node map diverges through
      // the threshold, otherwise a genuine stall
      traj.status = detail::diverges_through_threshold(traj.q[n - 1], c, F, p.sigma, threshold)
                        ? RunStatus::blow_up
                        : RunStatus::stalled;
      traj.t_star = g.t(n);
      traj.n_last = n - 1;
      break;
    }
    traj.q[n] = x;
    m[n] = detail::power_nonlin(x, p.sigma);
    traj.n_last = n;
    if (std::abs(x) > threshold) {
      traj.status = RunStatus::blow_up;
      traj.t_star = g.t(n);
      break;
    }
  }
  const int last = traj.n_last;
  traj.q.resize(last + 1);

  traj.r.resize(last + 1);
  for (int j = 0; j <= last; ++j) traj.r[j] = p.beta * m[j];

  // second-order finite differences of r (one-sided at the ends)
  traj.r_dot.assign(last + 1, complex{});
  if (last >= 2) {
    const double h = g.h;
    traj.r_dot[0] = (-3.0 * traj.r[0] + 4.0 * traj.r[1] - traj.r[2]) / (2.0 * h);
    for (int j = 1; j < last; ++j)
      traj.r_dot[j] = (traj.r[j + 1] - traj.r[j - 1]) / (2.0 * h);
    traj.r_dot[last] =
        (3.0 * traj.r[last] - 4.0 * traj.r[last - 1] + traj.r[last - 2]) / (2.0 * h);
  } else if (last == 1) {
    traj.r_dot[0] = traj.r_dot[1] = (traj.r[1] - traj.r[0]) / g.h;
  }

  if (opts.record_raw_residual) {
    // A-posteriori check against the RAW equation, with the history integral
    // re-evaluated by quadratic product integration (independent of the
    // trapezoidal weights that produced the trajectory).
    traj.residual_raw.assign(last + 1, 0.0);
    const complex b = kernels::const_b(p);
    const complex r0 = d.r0();
    const double cusp = 1.0 - p.abel_exponent();
    const detail::AbelSimpson simpson(p.abel_exponent(), g.h);
    for (int nn = 1; nn <= last; ++nn) {
      const complex sum = simpson.history(m, nn);
      const complex f_raw = table->f_tilde[nn] - r0 * b * std::pow(g.t(nn), cusp);
      traj.residual_raw[nn] = std::abs(traj.q[nn] + ia_beta * sum - f_raw);
    }
  }
  return traj;
}

struct ConvergenceReport {
  std::vector<double> h;
  std::vector<complex> q_final;
  std::vector<double> error;  // |q_h(T) - q_{h/2}(T)|
  std::vector<double> order;  // log2(error_i / error_{i+1})
  std::optional<double> observed_order;
};

// Self-convergence of q(T) under step halving.  Requires at least three steps
// in the list; reports the raw table and, when the errors decrease
// monotonically above rounding noise, the observed order from the finest pair.
inline ConvergenceReport self_convergence(const InitialDatum& d,
                                          const std::vector<double>& h_list, double T,
                                          const SolveOptions& opts = {}) {
  if (h_list.size() < 3)
    throw std::invalid_argument("self_convergence: need at least 3 step sizes");
  ConvergenceReport rep;
  rep.h = h_list;
  for (double h : h_list) {
    TimeGrid g = TimeGrid::from_final_time(T, h);
    ChargeTrajectory traj = solve_charge(d, g, opts);
    if (traj.status != RunStatus::completed)
      throw std::runtime_error("self_convergence: run did not complete");
    rep.q_final.push_back(traj.q.back());
  }
  for (std::size_t i = 0; i + 1 < rep.q_final.size(); ++i)
    rep.error.push_back(std::abs(rep.q_final[i] - rep.q_final[i + 1]));
  for (std::size_t i = 0; i + 1 < rep.error.size(); ++i)
    rep.order.push_back(std::log2(rep.error[i] / rep.error[i + 1]));

  const double scale = std::abs(rep.q_final.back());
  bool monotone = true;
  for (std::size_t i = 0; i + 1 < rep.error.size(); ++i)
    if (!(rep.error[i] > rep.error[i + 1])) monotone = false;
  bool above_noise = true;
  for (double e : rep.error)
    if (e < 1e-13 * std::max(1.0, scale)) above_noise = false;
  if (monotone && above_noise && !rep.order.empty())
    rep.observed_order = rep.order.back();
  return rep;
}

}  // namespace fse
