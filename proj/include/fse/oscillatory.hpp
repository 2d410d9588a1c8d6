#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

#include "fse/quad.hpp"

namespace fse::osc {

using complex = std::complex<double>;

// Oscillatory half-line integrals of Fourier type.
//
// All propagator-related quantities of the model reduce, after the
// substitution ω = k^{2s}, to integrals
//
//     ∫_0^∞ e^{-iωt} ω^{ζ-1} G(ω) dω,        ζ = 1/(2s) ∈ [1/2, 1),
//
// with G smooth on (0, ∞) and either rapidly decaying (Gaussian data) or
// algebraically decaying (Green's-function data).  The head [0, Ω₀], carrying
// a bounded number of oscillations, is integrated adaptively back in the
// k-variable where the integrand is regular at the origin; the tail
// [Ω₀, ∞) is summed over half-periods of the phase and accelerated with
// Wynn's epsilon algorithm.

struct Options {
  double abs_tol = 1e-12;
  double rel_tol = 1e-11;
  int head_oscillations = 8;   // oscillations kept in the adaptive head
  int max_half_periods = 320;  // tail panels before giving up
  int panel_points = 24;       // Gauss-Legendre points per half-period panel
};

struct NonConvergence : std::runtime_error {
  explicit NonConvergence(const std::string& what) : std::runtime_error(what) {}
};

// ∫_{Ω0}^∞ e^{sign·iωt} g(ω) dω by half-period summation + epsilon acceleration.
// Stops early when two consecutive panels fall below the absolute tolerance
// (rapidly decaying g) or once the panel start exceeds omega_cut.
template <class G>
complex oscillatory_tail(G&& g, double t, double Omega0, double omega_cut, int sign,
                         const Options& opt = {}) {
  const double period = M_PI / t;
  const complex i_unit(0.0, 1.0);
  std::vector<complex> sums;
  sums.reserve(64);
  complex sum{};
  double small_streak = 0;
  double err = std::numeric_limits<double>::infinity();
  for (int m = 0; m < opt.max_half_periods; ++m) {
    const double pa = Omega0 + m * period;
    if (pa > omega_cut) return sum;
    const double pb = pa + period;
    complex panel = quad::gl_integrate(
        [&](double om) { return std::exp(i_unit * (sign * om * t)) * g(om); }, pa, pb,
        opt.panel_points);
    sum += panel;
    sums.push_back(sum);
    if (std::abs(panel) < 0.05 * opt.abs_tol) {
      if (++small_streak >= 2) return sum;
    } else {
      small_streak = 0;
    }
    if (sums.size() >= 6) {
      complex acc = quad::wynn_limit(sums, &err);
      if (err < opt.abs_tol) return acc;
    }
  }
  complex acc = quad::wynn_limit(sums, &err);
  if (err < 50 * opt.abs_tol) return acc;
  throw NonConvergence("oscillatory_tail: no convergence after " +
                       std::to_string(opt.max_half_periods) + " half-periods (err=" +
                       std::to_string(err) + ")");
}

// ∫_0^∞ e^{-iωt} ω^{ζ-1} G(ω) dω for t > 0.  `omega_cut` marks where |G|
// becomes negligible (pass +inf for algebraic decay).
template <class G>
complex fourier_power_integral(G&& g, double zeta, double t, double omega_cut,
                               const Options& opt = {}) {
  if (!(t > 0.0)) throw std::invalid_argument("fourier_power_integral: t must be > 0");
  if (!(zeta > 0.0) || zeta > 1.0)
    throw std::invalid_argument("fourier_power_integral: zeta must be in (0, 1]");
  const double Omega0 = 2.0 * M_PI * opt.head_oscillations / t;
  const double head_end = std::min(Omega0, omega_cut);
  const complex i_unit(0.0, 1.0);
  // Head in the k = ω^ζ variable: integrand (1/ζ) e^{-i k^{1/ζ} t} G(k^{1/ζ})
  // is regular at k = 0.
  const double inv_zeta = 1.0 / zeta;
  auto head_f = [&](double k) {
    const double om = std::pow(k, inv_zeta);
    return std::exp(-i_unit * (om * t)) * g(om) / zeta;
  };
  auto head = quad::integrate_gk(head_f, 0.0, std::pow(head_end, zeta), opt.abs_tol,
                                 opt.rel_tol, 4000, 2 * opt.head_oscillations);
  if (!head.converged)
    throw NonConvergence("fourier_power_integral: head quadrature stalled (err=" +
                         std::to_string(head.error) + ")");
  if (omega_cut <= Omega0) return head.value;
  complex tail = oscillatory_tail(
      [&](double om) { return std::pow(om, zeta - 1.0) * g(om); }, t, Omega0, omega_cut, -1,
      opt);
  return head.value + tail;
}

// ∫_0^∞ e^{sign·ikx} g(k) dk for x > 0 (linear phase, no substitution).
template <class G>
complex fourier_halfline(G&& g, double x, int sign, double k_cut, const Options& opt = {}) {
  if (!(x > 0.0)) throw std::invalid_argument("fourier_halfline: x must be > 0");
  const double K0 = 2.0 * M_PI * opt.head_oscillations / x;
  const double head_end = std::min(K0, k_cut);
  const complex i_unit(0.0, 1.0);
  auto head = quad::integrate_gk(
      [&](double k) { return std::exp(i_unit * (sign * k * x)) * g(k); }, 0.0, head_end,
      opt.abs_tol, opt.rel_tol, 4000, 2 * opt.head_oscillations);
  if (!head.converged)
    throw NonConvergence("fourier_halfline: head quadrature stalled");
  if (k_cut <= K0) return head.value;
  return head.value + oscillatory_tail(g, x, K0, k_cut, sign, opt);
}

}  // namespace fse::osc
