#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "fse/kernels.hpp"
#include "fse/params.hpp"

namespace fse {

using complex = std::complex<double>;

// Admissible initial data:  ψ₀ = φ_{λ,0} - β|q₀|^{2σ} q₀ · G_s^λ  with a regular
// part φ_{λ,0} whose Fourier transform and k-derivative are closed-form.  The
// regular part is a sum of Gaussian packets (Schwartz class) and, where a
// λ-rebase or a standing-wave profile requires it, resolvent components
// c · G_s^μ.

struct GaussianTerm {
  complex amplitude;  // A
  double width;       // w > 0
  double k0;          // modulation frequency
};

struct GreenTerm {
  complex coeff;  // c
  double mu;      // μ > 0:  c · G_s^μ
};

struct RegularPart {
  std::vector<GaussianTerm> gaussians;
  std::vector<GreenTerm> greens;

  static RegularPart gaussian(complex amplitude, double width) {
    return gaussian_packet(amplitude, width, 0.0);
  }
  static RegularPart gaussian_packet(complex amplitude, double width, double k0) {
    if (!(width > 0.0)) throw std::domain_error("RegularPart: width must be positive");
    RegularPart r;
    r.gaussians.push_back({amplitude, width, k0});
    return r;
  }
  static RegularPart zero() { return RegularPart{}; }

  bool schwartz() const { return greens.empty(); }

  // φ̂(k):  A w e^{-w²(k-k₀)²/2}  per packet, plus resolvent transforms.
  complex fhat(double k, double s) const {
    complex v{};
    for (const auto& g : gaussians) {
      const double d = k - g.k0;
      v += g.amplitude * g.width * std::exp(-0.5 * g.width * g.width * d * d);
    }
    const double aks = std::pow(std::abs(k), 2.0 * s);
    for (const auto& t : greens) v += t.coeff / (std::sqrt(2.0 * M_PI) * (aks + t.mu));
    return v;
  }

  // ∂_k φ̂(k), closed form.
  complex dk_fhat(double k, double s) const {
    complex v{};
    for (const auto& g : gaussians) {
      const double d = k - g.k0;
      const double w2 = g.width * g.width;
      v += -g.amplitude * g.width * w2 * d * std::exp(-0.5 * w2 * d * d);
    }
    const double ak = std::abs(k);
    const double sgn = (k > 0) - (k < 0);
    const double aks = std::pow(ak, 2.0 * s);
    const double dk_aks = k == 0.0 ? 0.0 : 2.0 * s * std::pow(ak, 2.0 * s - 1.0) * sgn;
    for (const auto& t : greens) {
      const double den = aks + t.mu;
      v += -t.coeff * dk_aks / (std::sqrt(2.0 * M_PI) * den * den);
    }
    return v;
  }

  // φ(0) = Σ A + Σ c G_s^μ(0), closed form.
  complex at_zero(double s) const {
    complex v{};
    for (const auto& g : gaussians) v += g.amplitude;
    for (const auto& t : greens) v += t.coeff * kernels::green_at_origin(s, t.mu);
    return v;
  }

  // frequency beyond which the Gaussian content is negligible
  double gaussian_k_cut(double margin = 9.5) const {
    double cut = 0.0;
    for (const auto& g : gaussians)
      cut = std::max(cut, std::abs(g.k0) + margin / g.width);
    return cut;
  }

  // φ(ν·): packets dilate within the family; G_s^μ(νx) = ν^{2s-1} G_s^{μν^{2s}}(x).
  RegularPart dilated(double nu, double s) const {
    if (!(nu > 0.0)) throw std::domain_error("RegularPart::dilated: nu must be positive");
    RegularPart r;
    for (const auto& g : gaussians)
      r.gaussians.push_back({g.amplitude, g.width / nu, g.k0 * nu});
    const double amp = std::pow(nu, 2.0 * s - 1.0);
    const double freq = std::pow(nu, 2.0 * s);
    for (const auto& t : greens) r.greens.push_back({t.coeff * amp, t.mu * freq});
    return r;
  }
};

// Thrown when the scalar consistency condition q + βG(0)|q|^{2σ}q = φ(0) has no
// root on the branch continuously connected to the β = 0 solution.  Carries all
// real roots of the radial equation found by bracketing.
struct MultipleOrNoRoot : std::runtime_error {
  std::vector<double> radial_roots;
  MultipleOrNoRoot(const std::string& msg, std::vector<double> roots)
      : std::runtime_error(msg), radial_roots(std::move(roots)) {}
};

namespace detail {
// All real roots of F(u) = u + c|u|^{2σ}u - target on [-U, U], by sign-change
// bracketing and bisection.
inline std::vector<double> radial_roots(double c, double sigma, double target, double U) {
  auto F = [&](double u) { return u + c * std::pow(std::abs(u), 2.0 * sigma) * u - target; };
  std::vector<double> roots;
  const int n = 8192;
  double prev_u = -U, prev_f = F(-U);
  for (int i = 1; i <= n; ++i) {
    const double u = -U + 2.0 * U * i / n;
    const double f = F(u);
    if (prev_f == 0.0) roots.push_back(prev_u);
    if (prev_f * f < 0.0) {
      double lo = prev_u, hi = u;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (F(lo) * F(mid) <= 0.0)
          hi = mid;
        else
          lo = mid;
      }
      roots.push_back(0.5 * (lo + hi));
    }
    prev_u = u;
    prev_f = f;
  }
  return roots;
}
}  // namespace detail

// Solves q₀ + β G(0) |q₀|^{2σ} q₀ = φ(0).  Any solution is parallel (or
// anti-parallel) to φ(0), so the problem reduces to a radial scalar equation;
// damped fixed-point iteration with a Newton polish selects the root
// continuously connected to the β = 0 solution q₀ = φ(0).
inline complex solve_q0(const RegularPart& regular, const ModelParams& p) {
  const complex P = regular.at_zero(p.s);
  const double G0 = kernels::green_at_origin(p);
  const double c = p.beta * G0;
  const double target = std::abs(P);
  if (target == 0.0) return complex{};
  auto F = [&](double u) { return u + c * std::pow(std::abs(u), 2.0 * p.sigma) * u; };
  auto dF = [&](double u) {
    return 1.0 + c * (2.0 * p.sigma + 1.0) * std::pow(std::abs(u), 2.0 * p.sigma);
  };

  double u = target;
  bool ok = false;
  const double gamma = 0.5;
  for (int it = 0; it < 200; ++it) {
    const double next = (1.0 - gamma) * u + gamma * (target - c * std::pow(std::abs(u), 2.0 * p.sigma) * u);
    if (!std::isfinite(next) || std::abs(next) > 1e8 * (1.0 + target)) break;
    const double delta = std::abs(next - u);
    u = next;
    if (delta < 1e-13 * std::max(1.0, std::abs(u))) {
      ok = true;
      break;
    }
  }
  if (!ok || std::abs(F(u) - target) > 1e-12 * std::max(1.0, target)) {
    // Newton fallback from the last iterate
    for (int it = 0; it < 100 && std::isfinite(u); ++it) {
      const double d = dF(u);
      if (std::abs(d) < 1e-14) break;
      const double step = (F(u) - target) / d;
      u -= step;
      if (std::abs(step) < 1e-14 * std::max(1.0, std::abs(u))) break;
    }
    ok = std::isfinite(u) && u > 0.0 && std::abs(F(u) - target) < 1e-12 * std::max(1.0, target) &&
         dF(u) > 0.0;
  }
  if (!ok) {
    const double ustar = c < 0.0
                             ? std::pow(1.0 / ((2.0 * p.sigma + 1.0) * -c),
                                        1.0 / std::max(2.0 * p.sigma, 1e-12))
                             : 1.0;
    const double U = 4.0 * (target + ustar + 1.0);
    auto roots = detail::radial_roots(c, p.sigma, target, U);
    throw MultipleOrNoRoot(
        "solve_q0: no root connected to the beta=0 branch (|phi(0)| = " +
            std::to_string(target) + ")",
        roots);
  }
  return u * (P / target);
}

struct InitialDatum {
  RegularPart regular;
  complex q0{};
  ModelParams params;

  InitialDatum(RegularPart reg, complex q0_, const ModelParams& p)
      : regular(std::move(reg)), q0(q0_), params(p) {}

  // singular amplitude at t = 0:  r(0) = β |q₀|^{2σ} q₀
  complex r0() const {
    return params.beta * std::pow(std::abs(q0), 2.0 * params.sigma) * q0;
  }

  // ψ̂₀(k) = φ̂(k) - r₀ Ĝ_s^λ(k)
  complex psi0_hat(double k) const {
    return regular.fhat(k, params.s) - r0() * kernels::green_hat(k, params);
  }

  // ∂_k ψ̂₀(k) = ∂_k φ̂(k) + r₀ 2s|k|^{2s-1}sgn(k) / (√(2π)(|k|^{2s}+λ)²)
  complex dpsi0_hat(double k) const {
    const double ak = std::abs(k);
    const double sgn = (k > 0) - (k < 0);
    const double aks = std::pow(ak, 2.0 * params.s);
    const double den = aks + params.lambda;
    const double dk_aks =
        k == 0.0 ? 0.0 : 2.0 * params.s * std::pow(ak, 2.0 * params.s - 1.0) * sgn;
    return regular.dk_fhat(k, params.s) +
           r0() * dk_aks / (std::sqrt(2.0 * M_PI) * den * den);
  }

  double consistency_residual() const {
    const complex lhs =
        q0 + params.beta * kernels::green_at_origin(params) *
                 std::pow(std::abs(q0), 2.0 * params.sigma) * q0;
    return std::abs(lhs - regular.at_zero(params.s));
  }
};

inline InitialDatum make_datum(RegularPart regular, const ModelParams& p) {
  complex q0 = solve_q0(regular, p);
  return InitialDatum(std::move(regular), q0, p);
}

// Datum with a prescribed charge (standing waves, linear bound states); the
// self-consistency condition is still enforced.
inline InitialDatum make_datum_with_charge(RegularPart regular, const ModelParams& p,
                                           complex q0, double tol = 1e-10) {
  InitialDatum d(std::move(regular), q0, p);
  if (d.consistency_residual() > tol * std::max(1.0, std::abs(q0)))
    throw std::invalid_argument("make_datum_with_charge: q0 violates the consistency condition");
  return d;
}

// Same ψ₀ expressed with a different regularization parameter:
// φ_{λ'} = φ_λ + r₀ (G_s^{λ'} - G_s^λ);  the charge is unchanged.
inline InitialDatum rebase_lambda(const InitialDatum& d, double new_lambda) {
  RegularPart reg = d.regular;
  const complex r = d.r0();
  reg.greens.push_back({r, new_lambda});
  reg.greens.push_back({-r, d.params.lambda});
  return InitialDatum(std::move(reg), d.q0, d.params.with_lambda(new_lambda));
}

}  // namespace fse
