#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace fse {

// Product trapezoidal weights for the weakly singular history integral
//
//     ∫_0^{t_n} g(τ) (t_n - τ)^{-α} dτ  ≈  Σ_{j=0}^{n} w_{n,j} g(t_j),
//
// α = 1/(2s) ∈ [1/2, 1):  on each subinterval g is interpolated linearly and
// the kernel is integrated exactly.  With m = n - j and c = 1-α, d = 2-α,
//
//     P(m) = (m^c - (m-1)^c)/c,           Q(m) = (m^d - (m-1)^d)/d,
//     A(m) = (1-m) P(m) + Q(m),           B(m) = m P(m) - Q(m),
//     w_{n,j} = h^c · [ A(n-j) (j<n)  +  B(n-j+1) (j>0) ].
//
// The weights depend on n-j only and are cached for the whole grid.
class AbelWeights {
 public:
  AbelWeights(double alpha, double h, int n_max) : alpha_(alpha), h_(h) {
    if (!(alpha > 0.0) || alpha >= 1.0)
      throw std::domain_error("AbelWeights: alpha must lie in (0, 1)");
    if (!(h > 0.0) || n_max < 1) throw std::domain_error("AbelWeights: bad grid");
    hpow_ = std::pow(h, 1.0 - alpha);
    const double c = 1.0 - alpha, d = 2.0 - alpha;
    A_.resize(n_max + 2);
    B_.resize(n_max + 2);
    A_[0] = B_[0] = 0.0;
    for (int m = 1; m <= n_max + 1; ++m) {
      const double P = power_diff(m, c) / c;
      const double Q = power_diff(m, d) / d;
      A_[m] = (1.0 - m) * P + Q;
      B_[m] = m * P - Q;
    }
  }

  double alpha() const { return alpha_; }
  double h() const { return h_; }

  // w_{n,j} for 0 <= j <= n, n >= 1
  double w(int n, int j) const {
    double v = 0.0;
    if (j < n) v += A_[n - j];
    if (j > 0) v += B_[n - j + 1];
    return hpow_ * v;
  }

  // diagonal weight w_{n,n} = h^{1-α} / ((1-α)(2-α))
  double diag() const { return hpow_ * B_[1]; }

 private:
  // m^p - (m-1)^p without cancellation for large m
  static double power_diff(int m, double p) {
    if (m == 1) return 1.0;
    return -std::pow(static_cast<double>(m), p) * std::expm1(p * std::log1p(-1.0 / m));
  }

  double alpha_, h_, hpow_;
  std::vector<double> A_, B_;
};

}  // namespace fse
