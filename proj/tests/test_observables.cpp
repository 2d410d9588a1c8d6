#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "fse/observables.hpp"
#include "oracles.hpp"

using namespace fse;
using Catch::Approx;
using complex = std::complex<double>;

TEST_CASE("free flow conserves mass to rounding", "[observables]") {
  ModelParams p(0.75, 0.0, 0.4, 1.0);
  auto d = make_datum(RegularPart::gaussian(complex(0.5, 0.1), 1.0), p);
  TimeGrid tg(1.0 / 64.0, 64);
  auto traj = solve_charge(d, tg);
  GridSpec spec;
  spec.resolve_time = tg.T_final();
  SpectralGrid grid = build_grid(p, spec);
  ObserveOptions opt;
  opt.stride = 16;
  auto series = observe(d, traj, grid, opt);
  CHECK(series.max_mass_drift() < 1e-10);
  CHECK(series.max_energy_drift() < 1e-10);
}

TEST_CASE("inertia of a Gaussian datum matches the closed moment", "[observables]") {
  // I(0) = A² w^{1+2s} Γ((5-2s)/2) for φ = A e^{-x²/(2w²)}, β = 0
  for (double s : {0.75, 1.0}) {
    ModelParams p(s, 0.0, 0.4, 1.0);
    const double A = 0.7, width = 1.3;
    auto d = make_datum(RegularPart::gaussian(A, width), p);
    TimeGrid tg(1.0 / 64.0, 4);
    auto traj = solve_charge(d, tg);
    SpectralGrid grid = build_grid(p);
    WaveEvolution w(d, traj, grid);
    const double want =
        A * A * std::pow(width, 1.0 + 2.0 * s) * std::tgamma(2.5 - s);
    INFO("s=" << s);
    CHECK(inertia_of(w) == Approx(want).epsilon(1e-9));
    CHECK(inertia_of(w) >= 0.0);
  }
  // s = 1 cross-check against the x-space variance ‖xψ‖²
  {
    const double A = 0.7, width = 1.3;
    const double variance =
        oracle::refine_quadrature(
            [&](double x) { return x * x * A * A * std::exp(-x * x / (width * width)); },
            -30.0, 30.0, 1e-13);
    CHECK(A * A * std::pow(width, 3.0) * std::tgamma(1.5) == Approx(variance).epsilon(1e-10));
  }
}

TEST_CASE("inertia first derivative: parity zero and FD consistency", "[observables]") {
  ModelParams p(0.75, -1.0, 0.4, 1.0);
  auto d = make_datum(RegularPart::gaussian(0.2, 1.0), p);  // real even datum
  TimeGrid tg(1.0 / 256.0, 128);
  auto traj = solve_charge(d, tg);
  GridSpec spec;
  spec.resolve_time = tg.T_final();
  SpectralGrid grid = build_grid(p, spec);
  ObserveOptions opt;
  opt.stride = 8;
  auto series = observe(d, traj, grid, opt);

  CHECK(std::abs(series.Idot0) < 1e-9);  // İ(0) = 0 for real even data

  // central FD of I matches İ at interior samples
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < series.t.size(); ++i) {
    const double fd =
        (series.inertia[i + 1] - series.inertia[i - 1]) / (series.t[i + 1] - series.t[i - 1]);
    worst = std::max(worst, std::abs(fd - series.inertia_dot[i]));
  }
  const double scale = std::abs(series.inertia_dot[series.t.size() / 2]) + 1.0;
  CHECK(worst / scale < 1e-3);
}

TEST_CASE("virial identity on a sub-critical focusing run", "[observables][slow]") {
  ModelParams p(0.75, -1.0, 0.4, 1.0);
  auto d = make_datum(RegularPart::gaussian(0.2, 1.0), p);
  TimeGrid tg(1.0 / 256.0, 256);
  auto traj = solve_charge(d, tg);
  GridSpec spec;
  spec.resolve_time = tg.T_final();
  SpectralGrid grid = build_grid(p, spec);
  ObserveOptions opt;
  opt.stride = 8;  // FD step 1/32
  auto series = observe(d, traj, grid, opt);
  CHECK(series.virial_residual() < 5e-2 * std::abs(8.0 * p.s * p.s * series.E0));

  // conservation at this resolution
  CHECK(series.max_mass_drift() < 1e-3);
  CHECK(series.max_energy_drift() < 5e-3);
}

TEST_CASE("virial theory term reduces correctly", "[observables]") {
  ModelParams crit(0.75, -1.0, 0.5, 1.0);  // σ = σ_c
  CHECK(inertia_ddot_theory(complex(0.3, 0.1), crit, -0.2) ==
        Approx(8.0 * crit.s * crit.s * -0.2));
  ModelParams cls(1.0, -1.0, 1.0, 1.0);  // s = 1, σ = σ_c = 1: 8 E(0)
  CHECK(inertia_ddot_theory(complex(0.5, 0.0), cls, 0.7) == Approx(8.0 * 0.7));
  ModelParams free_p(0.8, 0.0, 0.3, 1.0);
  CHECK(inertia_ddot_theory(complex(1.0, 2.0), free_p, 1.1) ==
        Approx(8.0 * 0.8 * 0.8 * 1.1));
}

TEST_CASE("jump condition residual", "[observables]") {
  SECTION("free flow: no jump") {
    ModelParams p(0.75, 0.0, 0.4, 1.0);
    auto d = make_datum(RegularPart::gaussian(0.5, 1.0), p);
    TimeGrid tg(1.0 / 64.0, 16);
    auto traj = solve_charge(d, tg);
    SpectralGrid grid = build_grid(p);
    WaveEvolution w(d, traj, grid);
    w.advance_to(16);
    CHECK(jump_residual_of(w) < 1e-4);
  }
  SECTION("nonlinear run satisfies the jump condition") {
    ModelParams p(0.75, -1.0, 0.4, 1.0);
    auto d = make_datum(RegularPart::gaussian(0.2, 1.0), p);
    TimeGrid tg(1.0 / 256.0, 64);
    auto traj = solve_charge(d, tg);
    GridSpec spec;
    spec.resolve_time = tg.T_final();
    SpectralGrid grid = build_grid(p, spec);
    WaveEvolution w(d, traj, grid);
    w.advance_to(64);
    CHECK(jump_residual_of(w) < 1e-3);
  }
}

TEST_CASE("lambda invariance of reconstructed snapshots", "[observables][slow]") {
  ModelParams p1(0.75, -1.0, 0.4, 1.0);
  auto d1 = make_datum(RegularPart::gaussian(0.2, 1.0), p1);
  auto d4 = rebase_lambda(d1, 4.0);
  TimeGrid tg(1.0 / 256.0, 128);
  auto t1 = solve_charge(d1, tg);
  auto t4 = solve_charge(d4, tg);
  GridSpec spec;
  spec.resolve_time = tg.T_final();
  SpectralGrid grid = build_grid(p1, spec);  // shared k-grid
  WaveEvolution w1(d1, t1, grid), w4(d4, t4, grid);
  w1.advance_to(128);
  w4.advance_to(128);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    num += grid.w[i] * std::norm(w1.psi_hat(i) - w4.psi_hat(i));
    den += grid.w[i] * std::norm(w1.psi_hat(i));
  }
  CHECK(std::sqrt(num / den) < 1e-5);
}
