#pragma once

// Test-only oracles, independent of the library's evaluation paths: special
// functions, classical s = 1 closed forms, and brute-force reference
// quadratures.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace oracle {

using complex = std::complex<double>;
inline constexpr complex I{0.0, 1.0};

// Upper incomplete gamma Γ(a, z) for complex z (series for small |z|,
// modified Lentz continued fraction otherwise).  Good to ~1e-12 on the
// imaginary axis for a ∈ (0, 1).
inline complex upper_gamma(double a, complex z) {
  if (std::abs(z) < 9.0) {
    // Γ(a,z) = Γ(a) - z^a Σ_n (-z)^n / (n! (a+n))
    complex sum{};
    complex term{1.0, 0.0};
    for (int n = 0; n < 200; ++n) {
      if (n > 0) term *= -z / static_cast<double>(n);
      complex add = term / (a + n);
      sum += add;
      if (std::abs(add) < 1e-17 * (1.0 + std::abs(sum))) break;
    }
    return std::tgamma(a) - std::pow(z, a) * sum;
  }
  // Lentz for Γ(a,z) = e^{-z} z^a / (z + (1-a)/(1 + 1/(z + (2-a)/(1 + 2/(z + ...)))))
  const double tiny = 1e-300;
  complex b = z + 1.0 - a;
  complex c = 1.0 / tiny;
  complex d = 1.0 / b;
  complex h = d;
  for (int i = 1; i <= 400; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    complex delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-z) * std::pow(z, a) * h;
}

// (U_s(t) G_s^λ)(0) in closed form via the incomplete gamma:
//   (ζ/π) λ^{ζ-1} e^{iλt} Γ(ζ) Γ(1-ζ, iλt),  ζ = 1/(2s).
// At s = 1 this is the erfc-type expression e^{iλt} erfc(√(iλt)) / (2√λ).
inline complex free_green_trace(double s, double lambda, double t) {
  const double zeta = 1.0 / (2.0 * s);
  return zeta / M_PI * std::pow(lambda, zeta - 1.0) * std::exp(I * lambda * t) *
         std::tgamma(zeta) * upper_gamma(1.0 - zeta, I * lambda * t);
}

// Free s = 1 evolution of a Gaussian packet A e^{-x²/(2w²)} e^{ik₀x} under
// i ∂_t ψ = -ψ'' (multiplier e^{-ik²t}), evaluated at (t, x):
//   ψ = (A w / √(2α)) exp(β²/(4α) + γ),  α = w²/2 + it, β = w²k₀ + ix, γ = -w²k₀²/2.
inline complex free_gaussian_s1(complex A, double w, double k0, double t, double x) {
  const complex alpha = complex(0.5 * w * w, t);
  const complex beta = complex(w * w * k0, x);
  const complex gamma = complex(-0.5 * w * w * k0 * k0, 0.0);
  return A * w / std::sqrt(2.0 * alpha) * std::exp(beta * beta / (4.0 * alpha) + gamma);
}

// Panel-doubled composite Gauss quadrature on [a, b].  For oracle use only;
// deliberately independent of the library's adaptive quadrature.
template <class F>
auto refine_quadrature(F&& f, double a, double b, double tol = 1e-12, int max_doublings = 14) {
  using R = decltype(f(a));
  // 20-point Gauss-Legendre nodes/weights on [-1, 1] (upper half; symmetric)
  static const double gx[10] = {0.0765265211334973, 0.2277858511416451, 0.3737060887154195,
                                0.5108670019508271, 0.6360536807265150, 0.7463319064601508,
                                0.8391169718222188, 0.9122344282513259, 0.9639719272779138,
                                0.9931285991850949};
  static const double gw[10] = {0.1527533871307258, 0.1491729864726037, 0.1420961093183820,
                                0.1316886384491766, 0.1181945319615184, 0.1019301198172404,
                                0.0832767415767048, 0.0626720483341091, 0.0406014298003869,
                                0.0176140071391521};
  auto composite = [&](int panels) {
    R acc{};
    const double w = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
      const double c = a + (p + 0.5) * w, hl = 0.5 * w;
      for (int i = 0; i < 10; ++i)
        acc += gw[i] * (f(c - hl * gx[i]) + f(c + hl * gx[i])) * hl;
    }
    return acc;
  };
  int n = 4;
  R prev = composite(n);
  for (int d = 0; d < max_doublings; ++d) {
    n *= 2;
    R curr = composite(n);
    if (std::abs(curr - prev) < tol * (1.0 + std::abs(curr))) return curr;
    prev = curr;
  }
  return prev;
}

// Central finite difference of a scalar function.
template <class F>
auto central_diff(F&& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline double classical_green_s1(double lambda, double x) {
  return std::exp(-std::sqrt(lambda) * std::abs(x)) / (2.0 * std::sqrt(lambda));
}

}  // namespace oracle
