#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "fse/oscillatory.hpp"
#include "fse/params.hpp"
#include "fse/quad.hpp"

namespace fse::kernels {

using complex = std::complex<double>;
inline constexpr complex I{0.0, 1.0};

// --- propagator constants ---------------------------------------------------
//
// The free propagator kernel at the interaction point is
//   U_s(t, 0) = a(s) t^{-1/(2s)},   a(s) = (1/2π) ∫_R e^{-i|ρ|^{2s}} dρ,
// and the regularization of the forcing cusp uses
//   b(s) = (1/2π) ∫_R (e^{-i|ρ|^{2s}} - 1)/|ρ|^{2s} dρ = -i a(s) 2s/(2s-1).

inline complex const_a_closed(double s) {
  const double zeta = 1.0 / (2.0 * s);
  return std::tgamma(zeta) / (2.0 * M_PI * s) * std::polar(1.0, -0.5 * M_PI * zeta);
}

// a(s) directly from the defining oscillatory integral (ω = ρ^{2s}
// substitution, half-period tail with epsilon acceleration).
inline complex const_a_quadrature(double s) {
  const double zeta = 1.0 / (2.0 * s);
  complex v = osc::fourier_power_integral([](double) { return 1.0; }, zeta, 1.0,
                                          std::numeric_limits<double>::infinity());
  return zeta / M_PI * v;
}

inline complex const_b_closed(double s) {
  return -I * const_a_closed(s) * 2.0 * s / (2.0 * s - 1.0);
}

// b(s) from its defining integral, written as (ζ/π) ∫_0^∞ (e^{-iω}-1) ω^{ζ-2} dω.
// Head in the k-variable (regular at 0), oscillatory tail accelerated, constant
// tail in closed form.
inline complex const_b_quadrature(double s) {
  const double zeta = 1.0 / (2.0 * s);
  const double Omega0 = 16.0 * M_PI;
  auto head = quad::integrate_gk(
      [&](double k) {
        return quad::cis_minus_one(-std::pow(k, 2.0 * s)) * std::pow(k, -2.0 * s);
      },
      0.0, std::pow(Omega0, zeta), 1e-13, 1e-12, 4000, 32);
  complex osc_tail = osc::oscillatory_tail(
      [&](double om) { return std::pow(om, zeta - 2.0); }, 1.0, Omega0,
      std::numeric_limits<double>::infinity(), -1);
  const double const_tail = std::pow(Omega0, zeta - 1.0) / (1.0 - zeta);
  return (2.0 * s * head.value + osc_tail - const_tail) * zeta / M_PI;
}

// a(s) with a one-time cross-check of the Gamma closed form against the
// oscillatory quadrature (tolerance 1e-6), cached per s.
inline complex const_a(const ModelParams& p) {
  static std::map<double, complex> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(p.s);
  if (it != cache.end()) return it->second;
  const complex closed = const_a_closed(p.s);
  const complex quadr = const_a_quadrature(p.s);
  if (std::abs(closed - quadr) > 1e-6)
    throw std::logic_error("const_a: closed form and oscillatory quadrature disagree");
  cache.emplace(p.s, closed);
  return closed;
}

inline complex const_b(const ModelParams& p) { return const_b_closed(p.s); }

// U_s(t, 0) = a(s) t^{-1/(2s)}, t > 0.
inline complex propagator_at_origin(double t, const ModelParams& p) {
  if (!(t > 0.0)) throw std::domain_error("propagator_at_origin: t must be > 0");
  return const_a(p) * std::pow(t, -1.0 / (2.0 * p.s));
}

// --- Green's function of (-Δ)^s + λ ------------------------------------------

// Fourier transform:  Ĝ_s^λ(k) = 1 / (√(2π) (|k|^{2s} + λ)).
inline double green_hat(double k, const ModelParams& p) {
  return 1.0 / (std::sqrt(2.0 * M_PI) * (std::pow(std::abs(k), 2.0 * p.s) + p.lambda));
}

// G_s^λ(0) = λ^{1/(2s)-1} / (2s sin(π/(2s))).
inline double green_at_origin(double s, double lambda) {
  return std::pow(lambda, 1.0 / (2.0 * s) - 1.0) / (2.0 * s * std::sin(M_PI / (2.0 * s)));
}
inline double green_at_origin(const ModelParams& p) { return green_at_origin(p.s, p.lambda); }

// ‖G_s^λ‖² = (1/π)∫_0^∞ (k^{2s}+λ)^{-2} dk = (2s-1) λ^{1/(2s)-2} / (4s² sin(π/(2s))).
inline double green_l2_sq(double s, double lambda) {
  return (2.0 * s - 1.0) * std::pow(lambda, 1.0 / (2.0 * s) - 2.0) /
         (4.0 * s * s * std::sin(M_PI / (2.0 * s)));
}
inline double green_l2_sq(const ModelParams& p) { return green_l2_sq(p.s, p.lambda); }

// ‖(-Δ)^{s/2} G_s^λ‖² = G(0) - λ‖G‖².
inline double green_kinetic_sq(double s, double lambda) {
  return green_at_origin(s, lambda) - lambda * green_l2_sq(s, lambda);
}
inline double green_kinetic_sq(const ModelParams& p) {
  return green_kinetic_sq(p.s, p.lambda);
}

// Pointwise profile by cosine transform: G(x) = (1/π) ∫_0^∞ cos(k|x|)/(k^{2s}+λ) dk.
inline double green_profile_at(double x, const ModelParams& p, const osc::Options& opt = {}) {
  const double ax = std::abs(x);
  if (ax == 0.0) return green_at_origin(p);
  complex v = osc::fourier_halfline(
      [&](double k) { return 1.0 / (std::pow(k, 2.0 * p.s) + p.lambda); }, ax, +1,
      std::numeric_limits<double>::infinity(), opt);
  return v.real() / M_PI;
}

// One-sided fractional derivative of the Green's function (x ≠ 0):
//   D^{2s-1} G_s^λ(x) = -(sgn x / π) ∫_0^∞ sin(k|x|) k^{2s-1}/(k^{2s}+λ) dk.
inline double green_frac_deriv_at(double x, const ModelParams& p,
                                  const osc::Options& opt = {}) {
  if (x == 0.0) throw std::domain_error("green_frac_deriv_at: x must be nonzero");
  const double ax = std::abs(x);
  complex v = osc::fourier_halfline(
      [&](double k) {
        return std::pow(k, 2.0 * p.s - 1.0) / (std::pow(k, 2.0 * p.s) + p.lambda);
      },
      ax, +1, std::numeric_limits<double>::infinity(), opt);
  return -(x > 0 ? 1.0 : -1.0) * v.imag() / M_PI;
}

namespace detail {
// Correction exponents of D^{2s-1}G(x) as x -> 0^+: mixed powers x, x^{2s}, ...
inline std::vector<double> jump_exponents(double s) {
  std::vector<double> e{1.0, 2.0 * s, 2.0, 2.0 * s + 1.0};
  std::sort(e.begin(), e.end());
  std::vector<double> out;
  for (double v : e)
    if (out.empty() || v - out.back() > 1e-9) out.push_back(v);
  return out;
}
}  // namespace detail

// One-sided limit of D^{2s-1} G_s^λ at 0^± (side = +1 or -1) by Richardson
// extrapolation on a halving ladder of evaluation points.
inline double green_frac_deriv_limit(int side, const ModelParams& p,
                                     double* err_out = nullptr) {
  const double x0 = 0.25 * std::pow(p.lambda, -1.0 / (2.0 * p.s));
  const int levels = 6;
  std::vector<double> vals(levels);
  for (int j = 0; j < levels; ++j)
    vals[j] = green_frac_deriv_at(side * x0 / std::pow(2.0, j), p);
  return quad::richardson_limit(vals, detail::jump_exponents(p.s), err_out);
}

// Frequency-space fractional derivative D^μ: pointwise multiplication of
// Fourier data by i|k|^μ sgn(k).
inline std::vector<complex> frac_derivative(const std::vector<double>& k_nodes,
                                            const std::vector<complex>& values_hat,
                                            double mu) {
  if (!(mu > 0.0) || mu > 1.0)
    throw std::domain_error("frac_derivative: mu must lie in (0, 1]");
  if (k_nodes.size() != values_hat.size())
    throw std::invalid_argument("frac_derivative: size mismatch");
  std::vector<complex> out(values_hat.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double k = k_nodes[i];
    const double sgn = (k > 0) - (k < 0);
    out[i] = I * std::pow(std::abs(k), mu) * sgn * values_hat[i];
  }
  return out;
}

}  // namespace fse::kernels
