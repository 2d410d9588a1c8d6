#pragma once

#include <cmath>
#include <complex>
#include <limits>

#include "fse/initial_data.hpp"
#include "fse/kernels.hpp"
#include "fse/oscillatory.hpp"
#include "fse/params.hpp"

namespace fse {

// Forcing terms of the charge equation.
//
// The raw forcing f(t) = (U_s(t) ψ₀)(0) splits along the regular/singular
// decomposition of the datum into
//     f(t) = f₁(t) - r₀ f₃(t),     f₁ = (U_s(t) φ_{λ,0})(0),  f₃ = (U_s(t) G_s^λ)(0),
// and the regularized equation uses
//     f̃(t) = f₁(t) - r₀ G(0) - r₀ f̃₃(t),
//     f̃₃(t) = f₃(t) - G(0) - b(s) t^{1-1/(2s)}
//            = -(λ/π) ∫_0^∞ (e^{-ik^{2s}t} - 1) / (k^{2s}(k^{2s}+λ)) dk,
// which is continuous at t = 0 (the t^{1-1/(2s)} cusp is subtracted).

// f̃₃(t): head in the k-variable, oscillatory ω-tail with epsilon acceleration,
// constant tail in a mapped closed-to-smooth form.
inline complex forcing_f3_tilde(double t, const ModelParams& p, const osc::Options& opt = {}) {
  if (t == 0.0) return complex{};
  if (!(t > 0.0)) throw std::domain_error("forcing_f3_tilde: t must be >= 0");
  const double s2 = 2.0 * p.s;
  const double zeta = 1.0 / s2;
  const double Omega0 = 2.0 * M_PI * opt.head_oscillations / t;
  const double K0 = std::pow(Omega0, zeta);
  auto head = quad::integrate_gk(
      [&](double k) {
        const double ks = std::pow(k, s2);
        return quad::cis_minus_one(-ks * t) / (ks * (ks + p.lambda));
      },
      0.0, K0, opt.abs_tol, opt.rel_tol, 4000, 2 * opt.head_oscillations);
  if (!head.converged) throw osc::NonConvergence("forcing_f3_tilde: head quadrature stalled");
  complex t_osc = osc::oscillatory_tail(
      [&](double om) { return std::pow(om, zeta - 2.0) / (om + p.lambda); }, t, Omega0,
      std::numeric_limits<double>::infinity(), -1, opt);
  auto t_const = quad::integrate_gk(
      [&](double x) { return std::pow(x, 1.0 - zeta) / (Omega0 + p.lambda * x); }, 0.0, 1.0,
      opt.abs_tol, opt.rel_tol, 2000, 4);
  const complex tail = zeta * (t_osc - std::pow(Omega0, zeta - 1.0) * t_const.value);
  return -(p.lambda / M_PI) * (head.value + tail);
}

// f₃(t) = (U_s(t) G_s^λ)(0) = G(0) + b(s) t^{1-1/(2s)} + f̃₃(t).
inline complex forcing_f3(double t, const ModelParams& p, const osc::Options& opt = {}) {
  if (t == 0.0) return complex{kernels::green_at_origin(p), 0.0};
  return kernels::green_at_origin(p) +
         kernels::const_b(p) * std::pow(t, 1.0 - 1.0 / (2.0 * p.s)) +
         forcing_f3_tilde(t, p, opt);
}

namespace detail {
// (U_s(t) applied to one Gaussian packet)(0), via the ω-substituted split rule.
inline complex gaussian_trace(const GaussianTerm& g, double s, double t,
                              const osc::Options& opt) {
  const double zeta = 1.0 / (2.0 * s);
  const double k_cut = std::abs(g.k0) + 9.5 / g.width;
  const double omega_cut = std::pow(k_cut, 2.0 * s);
  auto G = [&](double om) {
    const double k = std::pow(om, zeta);
    const double w2 = 0.5 * g.width * g.width;
    const double dm = k - g.k0, dp = k + g.k0;
    return std::exp(-w2 * dm * dm) + std::exp(-w2 * dp * dp);
  };
  complex v = osc::fourier_power_integral(G, zeta, t, omega_cut, opt);
  return g.amplitude * g.width / std::sqrt(2.0 * M_PI) * zeta * v;
}
}  // namespace detail

// f₁(t) = (U_s(t) φ_{λ,0})(0); at t = 0 this is φ_{λ,0}(0).
inline complex forcing_f1(double t, const InitialDatum& d, const osc::Options& opt = {}) {
  if (t == 0.0) return d.regular.at_zero(d.params.s);
  complex v{};
  for (const auto& g : d.regular.gaussians)
    v += detail::gaussian_trace(g, d.params.s, t, opt);
  for (const auto& gt : d.regular.greens)
    v += gt.coeff * forcing_f3(t, d.params.with_lambda(gt.mu), opt);
  return v;
}

// f̃(t) = f₁(t) - r₀ G(0) - r₀ f̃₃(t);  f̃(0) = q₀.
inline complex forcing_regularized(double t, const InitialDatum& d,
                                   const osc::Options& opt = {}) {
  const complex r = d.r0();
  complex v = forcing_f1(t, d, opt) - r * kernels::green_at_origin(d.params);
  if (r != complex{}) v -= r * forcing_f3_tilde(t, d.params, opt);
  return v;
}

// Raw forcing f(t) = f̃(t) - r₀ b(s) t^{1-1/(2s)} (the un-regularized equation's
// right-hand side; kept for the a-posteriori residual).
inline complex forcing_raw(double t, const InitialDatum& d, const osc::Options& opt = {}) {
  complex v = forcing_regularized(t, d, opt);
  if (t > 0.0)
    v -= d.r0() * kernels::const_b(d.params) * std::pow(t, 1.0 - 1.0 / (2.0 * d.params.s));
  return v;
}

}  // namespace fse
