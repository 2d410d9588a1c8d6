#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "fse/initial_data.hpp"
#include "fse/spectral_grid.hpp"
#include "oracles.hpp"

using namespace fse;
using Catch::Approx;
using complex = std::complex<double>;

TEST_CASE("charge consistency: free case and defocusing case", "[initial_data]") {
  ModelParams free_p(0.75, 0.0, 0.4, 1.0);
  auto d0 = make_datum(RegularPart::gaussian(complex(0.7, -0.2), 1.3), free_p);
  CHECK(std::abs(d0.q0 - complex(0.7, -0.2)) < 1e-14);

  ModelParams rep(0.75, 2.0, 0.4, 1.0);
  auto d1 = make_datum(RegularPart::gaussian(1.0, 1.0), rep);
  CHECK(d1.q0.imag() == 0.0);
  CHECK(d1.q0.real() > 0.0);
  CHECK(d1.q0.real() < 1.0);
  CHECK(d1.consistency_residual() < 1e-12);
}

TEST_CASE("focusing cubic branch matches a bisection oracle", "[initial_data]") {
  // s=1, λ=1, β=-1, σ=1: q - 0.5 q³ = 0.1, smallest-magnitude real root.
  ModelParams p(1.0, -1.0, 1.0, 1.0);
  auto d = make_datum(RegularPart::gaussian(0.1, 1.0), p);
  auto F = [](double u) { return u - 0.5 * u * u * u - 0.1; };
  double lo = 0.0, hi = 1.0 / std::sqrt(1.5);  // increasing branch
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (F(lo) * F(mid) <= 0.0 ? hi : lo) = mid;
  }
  CHECK(d.q0.real() == Approx(0.5 * (lo + hi)).epsilon(1e-10));
  CHECK(d.q0.imag() == 0.0);
}

TEST_CASE("focusing case with no connected root reports all branches", "[initial_data]") {
  ModelParams p(0.75, -1.0, 0.4, 1.0);
  try {
    make_datum(RegularPart::gaussian(1.0, 1.0), p);  // |φ(0)| = 1 beyond the fold
    FAIL("expected MultipleOrNoRoot");
  } catch (const MultipleOrNoRoot& e) {
    REQUIRE_FALSE(e.radial_roots.empty());
    const double G0 = kernels::green_at_origin(p);
    for (double u : e.radial_roots)
      CHECK(std::abs(u - G0 * std::pow(std::abs(u), 0.8) * u - 1.0) < 1e-8);
  }
}

TEST_CASE("initial Fourier data and its k-derivative", "[initial_data]") {
  ModelParams p(0.8, -0.5, 0.6, 1.5);
  auto d = make_datum(RegularPart::gaussian_packet(complex(0.25, 0.1), 1.2, 0.7), p);

  SECTION("beta = 0 reduces to the regular part") {
    ModelParams pf(0.8, 0.0, 0.6, 1.5);
    auto df = make_datum(d.regular, pf);
    for (double k : {-2.0, 0.3, 5.0})
      CHECK(std::abs(df.psi0_hat(k) - df.regular.fhat(k, pf.s)) < 1e-15);
  }

  SECTION("singular-part derivative vanishes at k = 0 for s < 1") {
    CHECK(std::abs(d.dpsi0_hat(0.0) - d.regular.dk_fhat(0.0, p.s)) == 0.0);
  }

  SECTION("finite differences of psi0_hat match dpsi0_hat away from k = 0") {
    for (double k : {-1.7, 0.4, 1.1, 3.0}) {
      complex fd = oracle::central_diff([&](double kk) { return d.psi0_hat(kk); }, k, 1e-5);
      CHECK(std::abs(fd - d.dpsi0_hat(k)) < 1e-6);
    }
  }

  SECTION("closed-form regular derivative matches finite differences") {
    for (double k : {-0.9, 0.2, 2.4}) {
      complex fd = oracle::central_diff(
          [&](double kk) { return d.regular.fhat(kk, p.s); }, k, 1e-5);
      CHECK(std::abs(fd - d.regular.dk_fhat(k, p.s)) < 1e-6);
    }
  }
}

TEST_CASE("mass of the datum is finite and grid-stable; q0 = psi0(0)", "[initial_data]") {
  ModelParams p(0.75, -1.0, 0.4, 1.0);
  auto d = make_datum(RegularPart::gaussian(0.2, 1.0), p);

  SpectralGrid g1 = build_grid(p);
  GridSpec fine;
  fine.pts_graded = 8;
  fine.pts_osc = 14;
  fine.pts_smooth = 14;
  fine.pts_tail = 80;
  fine.k_core = 64.0;
  SpectralGrid g2 = build_grid(p, fine);

  auto mass_sq = [&](const SpectralGrid& g) {
    return g.integrate([&](double k) { return std::norm(d.psi0_hat(k)); });
  };
  const double m1 = mass_sq(g1), m2 = mass_sq(g2);
  CHECK(std::isfinite(m1));
  CHECK(m1 == Approx(m2).epsilon(1e-8));

  const complex psi0_at_0 = g1.inverse_transform_at(
      [&] {
        std::vector<complex> v(g1.size());
        for (std::size_t i = 0; i < g1.size(); ++i) v[i] = d.psi0_hat(g1.k[i]);
        return v;
      }(),
      0.0);
  CHECK(std::abs(psi0_at_0 - d.q0) < 1e-8);
}

TEST_CASE("lambda rebase leaves the wavefunction untouched", "[initial_data]") {
  ModelParams p(0.75, -1.0, 0.4, 1.0);
  auto d1 = make_datum(RegularPart::gaussian(0.2, 1.0), p);
  auto d4 = rebase_lambda(d1, 4.0);
  CHECK(d4.params.lambda == 4.0);
  CHECK(d4.q0 == d1.q0);
  CHECK(d4.consistency_residual() < 1e-12);
  for (double k : {-3.0, -0.5, 0.0, 1.2, 8.0})
    CHECK(std::abs(d4.psi0_hat(k) - d1.psi0_hat(k)) < 1e-14);
}

TEST_CASE("dilation acts by the Fourier scaling rule", "[initial_data]") {
  ModelParams p(0.75, -1.0, 1.0, 1.0);
  RegularPart reg = RegularPart::gaussian_packet(0.4, 1.0, 0.5);
  reg.greens.push_back({complex(0.1, 0.0), 2.0});
  const double nu = 0.5;
  RegularPart dil = reg.dilated(nu, p.s);
  for (double k : {-2.0, 0.3, 1.5})
    CHECK(std::abs(dil.fhat(k, p.s) - reg.fhat(k / nu, p.s) / nu) < 1e-14);
  RegularPart same = reg.dilated(1.0, p.s);
  for (double k : {-1.0, 0.7})
    CHECK(std::abs(same.fhat(k, p.s) - reg.fhat(k, p.s)) < 1e-15);
  // value at the origin is dilation-invariant
  CHECK(std::abs(dil.at_zero(p.s) - reg.at_zero(p.s)) < 1e-12);
}
