#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace fse {

// Parameters of the fractional Schrödinger model with a concentrated power
// nonlinearity at the origin:
//
//   i ∂_t ψ = (-Δ)^s ψ   for x ≠ 0,      [D^{2s-1} ψ](0) = β |ψ(0)|^{2σ} ψ(0),
//
// where (-Δ)^s is the Fourier multiplier |k|^{2s}.  λ > 0 enters only through
// the regular/singular decomposition ψ = φ_λ - r(t) G_s^λ and must not affect
// any physical output.
struct ModelParams {
  double s;       // fractional order, in (1/2, 1]
  double beta;    // coupling; β < 0 focusing, β > 0 defocusing
  double sigma;   // nonlinearity power, ≥ 0 (σ = 0 is the linear delta model)
  double lambda;  // regularization parameter, > 0

  ModelParams(double s_, double beta_, double sigma_, double lambda_)
      : s(s_), beta(beta_), sigma(sigma_), lambda(lambda_) {
    if (!(s > 0.5) || !(s <= 1.0))
      throw std::domain_error("ModelParams: s must lie in (1/2, 1], got " + std::to_string(s_));
    if (!(lambda > 0.0))
      throw std::domain_error("ModelParams: lambda must be positive");
    if (!(sigma >= 0.0))
      throw std::domain_error("ModelParams: sigma must be nonnegative");
    if (!std::isfinite(beta))
      throw std::domain_error("ModelParams: beta must be finite");
  }

  // Abel kernel exponent: the charge equation kernel is (t-τ)^{-1/(2s)}.
  double abel_exponent() const { return 1.0 / (2.0 * s); }

  // Critical nonlinearity power σ_c = 2s - 1 separating guaranteed global
  // existence from possible blow-up in the focusing case.
  double sigma_c() const { return 2.0 * s - 1.0; }

  bool focusing() const { return beta < 0.0; }
  bool linear() const { return sigma == 0.0; }

  ModelParams with_lambda(double new_lambda) const {
    return ModelParams(s, beta, sigma, new_lambda);
  }
  ModelParams with_beta(double new_beta) const {
    return ModelParams(s, new_beta, sigma, lambda);
  }
};

}  // namespace fse
