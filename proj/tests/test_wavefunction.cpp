#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "fse/observables.hpp"
#include "fse/wavefunction.hpp"
#include "oracles.hpp"

using namespace fse;
using Catch::Approx;
using complex = std::complex<double>;

namespace {
struct Setup {
  ModelParams p;
  InitialDatum d;
  TimeGrid tg;
  ChargeTrajectory traj;
  Setup(double s, double beta, double sigma, complex A, double h, int N)
      : p(s, beta, sigma, 1.0),
        d(make_datum(RegularPart::gaussian(A, 1.0), p)),
        tg(h, N),
        traj(solve_charge(d, tg)) {}
};
}  // namespace

TEST_CASE("reconstruction at t = 0 reproduces the datum", "[wavefunction]") {
  Setup su(0.8, -0.6, 0.5, 0.25, 1.0 / 128.0, 8);
  for (double k : {-2.2, -0.4, 0.3, 1.9}) {
    CHECK(std::abs(psi_hat_direct(su.d, su.traj, 0, k) - su.d.psi0_hat(k)) < 1e-14);
    CHECK(std::abs(regular_part_hat(su.d, su.traj, 0, k) -
                   su.d.regular.fhat(k, su.p.s)) < 1e-14);
    CHECK(std::abs(dk_psi_hat_point(su.d, su.traj, 0, k) - su.d.dpsi0_hat(k)) < 1e-14);
  }
}

TEST_CASE("free flow is a pointwise phase rotation", "[wavefunction]") {
  Setup su(0.75, 0.0, 0.4, complex(0.4, 0.1), 1.0 / 64.0, 32);
  for (double k : {-1.5, 0.2, 3.0}) {
    const complex now = psi_hat_direct(su.d, su.traj, 32, k);
    CHECK(std::abs(now) == Approx(std::abs(su.d.psi0_hat(k))).margin(1e-13));
    const double Om = std::pow(std::abs(k), 2.0 * su.p.s);
    const complex expect = std::polar(1.0, -Om * su.tg.t(32)) * su.d.psi0_hat(k);
    CHECK(std::abs(now - expect) < 1e-13);
  }
}

TEST_CASE("Duhamel and integration-by-parts routes agree", "[wavefunction]") {
  Setup su(0.8, -0.6, 0.5, 0.25, 1.0 / 1024.0, 64);
  for (double k : {-1.2, -0.3, 0.45, 1.4}) {
    for (int n : {16, 64}) {
      const complex a = psi_hat_direct(su.d, su.traj, n, k);
      const complex b = psi_hat_byparts(su.d, su.traj, n, k);
      INFO("k=" << k << " n=" << n);
      CHECK(std::abs(a - b) < 1e-6);
    }
  }
}

TEST_CASE("sigma = 0 keeps the two routes consistent at small t", "[wavefunction]") {
  ModelParams p(0.8, -0.4, 0.0, 1.0);
  auto d = make_datum(RegularPart::gaussian(0.4, 1.0), p);
  TimeGrid tg(1.0 / 1024.0, 32);
  auto traj = solve_charge(d, tg);
  for (double k : {-0.8, 0.3, 1.1})
    CHECK(std::abs(psi_hat_direct(d, traj, 32, k) - psi_hat_byparts(d, traj, 32, k)) < 1e-6);
}

TEST_CASE("decomposition identity holds exactly on the grid", "[wavefunction]") {
  Setup su(0.75, -1.0, 0.4, 0.2, 1.0 / 128.0, 32);
  SpectralGrid grid = build_grid(su.p);
  WaveEvolution w(su.d, su.traj, grid);
  w.advance_to(32);
  for (std::size_t i = 0; i < grid.size(); i += 113) {
    const complex lhs = w.psi_hat(i);
    const complex rhs = w.phi_hat(i) - w.r() * kernels::green_hat(grid.k[i], su.p);
    CHECK(std::abs(lhs - rhs) < 1e-16 + 1e-14 * std::abs(lhs));
  }
  // incremental sweep matches the pointwise reference route
  for (double k : {-1.1, 0.6}) {
    // nearest grid node
    std::size_t best = 0;
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (std::abs(grid.k[i] - k) < std::abs(grid.k[best] - k)) best = i;
    CHECK(std::abs(w.psi_hat(best) - psi_hat_byparts(su.d, su.traj, 32, grid.k[best])) <
          1e-12);
  }
}

TEST_CASE("trace consistency: psi(t, 0) equals the charge", "[wavefunction]") {
  // march and reconstruction discretize differently; the trace identity holds
  // to the reconstruction tolerance (tail truncation + endpoint stencil of ṙ)
  Setup su(0.75, -1.0, 0.4, 0.2, 1.0 / 256.0, 64);
  GridSpec spec;
  spec.resolve_time = su.tg.T_final();
  spec.k_core = 96.0;
  SpectralGrid grid = build_grid(su.p, spec);
  WaveEvolution w(su.d, su.traj, grid);
  w.advance_to(64);
  CHECK(std::abs(w.psi_at(0.0) - su.traj.q[64]) < 1e-5);
}

TEST_CASE("free Gaussian at s = 1 matches the closed form", "[wavefunction]") {
  ModelParams p(1.0, 0.0, 0.0, 1.0);
  const complex A(0.8, 0.0);
  const double width = 1.0, k0 = 0.9;
  auto d = make_datum(RegularPart::gaussian_packet(A, width, k0), p);
  TimeGrid tg(1.0 / 256.0, 128);
  auto traj = solve_charge(d, tg);
  GridSpec spec;
  spec.resolve_time = tg.T_final();
  SpectralGrid grid = build_grid(p, spec);
  WaveEvolution w(d, traj, grid);
  w.advance_to(128);
  const double t = tg.t(128);
  for (double x : {-1.0, 0.0, 0.8, 2.4}) {
    const complex want = oracle::free_gaussian_s1(A, width, k0, t, x);
    const complex got = w.psi_at(x);
    INFO("x=" << x);
    CHECK(std::abs(got - want) < 1e-6);
  }
}

TEST_CASE("k-derivative formula matches finite differences", "[wavefunction]") {
  Setup su(0.8, -0.6, 0.5, 0.25, 1.0 / 512.0, 64);
  for (double k : {-1.3, 0.4, 0.9, 2.2}) {
    const complex fd = oracle::central_diff(
        [&](double kk) { return psi_hat_byparts(su.d, su.traj, 64, kk); }, k, 1e-4);
    const complex cl = dk_psi_hat_point(su.d, su.traj, 64, k);
    INFO("k=" << k);
    CHECK(std::abs(fd - cl) < 1e-5);
  }
}

TEST_CASE("k-derivative reduces correctly in the free case", "[wavefunction]") {
  Setup su(0.75, 0.0, 0.4, complex(0.5, -0.2), 1.0 / 128.0, 32);
  const double t = su.tg.t(32);
  for (double k : {-0.7, 0.5, 1.8}) {
    const double Om = std::pow(std::abs(k), 2.0 * su.p.s);
    const double kk = 2.0 * su.p.s * std::pow(std::abs(k), 2.0 * su.p.s - 1.0) *
                      ((k > 0) - (k < 0));
    const complex psi = psi_hat_byparts(su.d, su.traj, 32, k);
    const complex expect =
        complex(0.0, -kk * t) * psi + std::polar(1.0, -Om * t) * su.d.dpsi0_hat(k);
    CHECK(std::abs(dk_psi_hat_point(su.d, su.traj, 32, k) - expect) < 1e-12);
  }
}
