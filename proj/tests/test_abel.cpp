#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fse/abel.hpp"

using namespace fse;
using Catch::Approx;

TEST_CASE("weights integrate constants exactly", "[abel]") {
  for (double s : {0.6, 0.75, 1.0}) {
    const double alpha = 1.0 / (2.0 * s);
    const double h = 1.0 / 64.0;
    const int N = 128;
    AbelWeights w(alpha, h, N);
    for (int n : {1, 2, 17, 128}) {
      double sum = 0.0;
      for (int j = 0; j <= n; ++j) sum += w.w(n, j);
      const double exact = std::pow(n * h, 1.0 - alpha) / (1.0 - alpha);
      INFO("s=" << s << " n=" << n);
      CHECK(sum == Approx(exact).epsilon(1e-13));
    }
  }
}

TEST_CASE("weights integrate a linear factor exactly (Beta integral)", "[abel]") {
  // ∫_0^1 τ (1-τ)^{-1/2} dτ = 4/3 at s = 1
  const double h = 1.0 / 32.0;
  const int N = 32;
  AbelWeights w(0.5, h, N);
  double sum = 0.0;
  for (int j = 0; j <= N; ++j) sum += w.w(N, j) * (j * h);
  CHECK(sum == Approx(4.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("weights are positive; diagonal follows the exact closed form", "[abel]") {
  for (double s : {0.6, 0.85, 1.0}) {
    const double alpha = 1.0 / (2.0 * s);
    for (double h : {1.0 / 16.0, 1.0 / 256.0, 1.0 / 4096.0}) {
      AbelWeights w(alpha, h, 64);
      for (int n : {1, 5, 64})
        for (int j = 0; j <= n; ++j) CHECK(w.w(n, j) > 0.0);
      const double exact = std::pow(h, 1.0 - alpha) / ((1.0 - alpha) * (2.0 - alpha));
      CHECK(w.diag() == Approx(exact).epsilon(1e-14));
      // h -> 0 scaling: h^{1-1/(2s)} times the fixed prefactor
      CHECK(w.diag() / std::pow(h, 1.0 - alpha) ==
            Approx(1.0 / ((1.0 - alpha) * (2.0 - alpha))).epsilon(1e-14));
    }
  }
}

TEST_CASE("far-past weights remain accurate (no cancellation)", "[abel]") {
  AbelWeights w(0.5, 1e-3, 40000);
  // against direct evaluation in long double at large n-j
  const int n = 40000, j = 3;
  const long double c = 0.5L, d = 1.5L;
  const long double m = n - j;
  auto P = (std::pow(m, (long double)c) - std::pow(m - 1, (long double)c)) / c;
  auto Q = (std::pow(m, (long double)d) - std::pow(m - 1, (long double)d)) / d;
  const long double A = (1.0L - m) * P + Q;
  const long double Bnext =
      (m + 1) * ((std::pow(m + 1, (long double)c) - std::pow(m, (long double)c)) / c) -
      (std::pow(m + 1, (long double)d) - std::pow(m, (long double)d)) / d;
  const double expect = std::pow(1e-3, 0.5) * (double)(A + Bnext);
  CHECK(w.w(n, j) == Approx(expect).epsilon(1e-9));
}
