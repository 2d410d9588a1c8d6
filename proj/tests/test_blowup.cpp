#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fse/blowup.hpp"
#include "oracles.hpp"

using namespace fse;
using Catch::Approx;

TEST_CASE("critical exponent values", "[blowup]") {
  CHECK(ModelParams(0.75, -1.0, 1.0, 1.0).sigma_c() == 0.5);
  CHECK(ModelParams(1.0, -1.0, 1.0, 1.0).sigma_c() == 1.0);
}

TEST_CASE("dilation scaling of kinetic energy", "[blowup]") {
  ModelParams p(0.75, -1.0, 1.0, 4.0);
  auto base = make_datum(RegularPart::gaussian(0.5, 1.0), p);
  GridSpec spec;
  spec.k_core = 64.0;
  spec.pts_tail = 80;
  spec.pts_graded = 8;
  SpectralGrid grid = build_grid(p, spec);
  for (double nu : {1.0, 0.5, 0.25}) {
    auto chk = energy_scaling_check(base, nu, grid);
    INFO("nu=" << nu);
    CHECK(chk.seminorm_ratio_error < 1e-8);
    CHECK(chk.energy_law_error < 1e-6);
  }
  // identity at nu = 1
  auto same = scaled_datum(base, 1.0);
  CHECK(std::abs(same.q0 - base.q0) < 1e-13);
  // scaled datum keeps the origin value, hence the charge
  auto half = scaled_datum(base, 0.5);
  CHECK(std::abs(half.q0 - base.q0) < 1e-12);
}

TEST_CASE("small dilation drives the energy negative", "[blowup]") {
  ModelParams p(0.75, -1.0, 1.0, 10.0);
  auto base = make_datum(RegularPart::gaussian(0.64, 1.0), p);
  GridSpec spec;
  SpectralGrid grid = build_grid(p, spec);
  double prev = 1e300;
  for (double nu : {1.0, 0.4, 0.12}) {
    auto chk = energy_scaling_check(base, nu, grid);
    CHECK(chk.energy_scaled < prev);
    prev = chk.energy_scaled;
  }
  CHECK(prev < 0.0);
}

TEST_CASE("Gagliardo-Nirenberg constant estimate", "[blowup]") {
  // at s = 1 the resolvent profile saturates the bound; the Gaussian does not
  const double ratio_gauss =
      gn_ratio(1.0, std::pow(M_PI, 0.25), std::sqrt(std::tgamma(1.5)), 1.0);
  const double est = gn_constant_estimate(ModelParams(1.0, -1.0, 1.0, 1.0));
  CHECK(est >= ratio_gauss);
  CHECK(est == Approx(1.0).epsilon(1e-10));  // G_1^λ ratio is exactly 1
  CHECK(ratio_gauss < est);

  // quadrature cross-check of the closed-form Gaussian norms at s = 0.75
  {
    const double s = 0.75;
    const double l2 = oracle::refine_quadrature(
        [](double x) { return std::exp(-x * x); }, -12.0, 12.0, 1e-13);
    CHECK(std::sqrt(l2) == Approx(std::pow(M_PI, 0.25)).epsilon(1e-12));
    const double semi = oracle::refine_quadrature(
        [&](double k) { return std::pow(std::abs(k), 2.0 * s) * std::exp(-k * k); }, -12.0,
        12.0, 1e-13);
    CHECK(semi == Approx(std::tgamma(s + 0.5)).epsilon(1e-10));
  }
}

TEST_CASE("critical mass threshold", "[blowup]") {
  const double Cs = 1.2;
  double prev = 1e300;
  for (double beta : {0.5, 1.0, 2.0, 4.0}) {
    ModelParams p(0.75, -beta, 0.5, 1.0);
    const double c = critical_mass(p, Cs);
    CHECK(c > 0.0);
    CHECK(c < prev);  // decreasing in |β|
    prev = c;
  }
  // closed form at s = 1: C = (2/(|β|Cs⁴))^{1/2}
  ModelParams p1(1.0, -1.0, 1.0, 1.0);
  CHECK(critical_mass(p1, Cs) == Approx(std::sqrt(2.0 / std::pow(Cs, 4.0))).epsilon(1e-14));
}

TEST_CASE("virial parabola root", "[blowup]") {
  // I(t) = 1 + 0·t + 4s²E0 t², E0 < 0: root at sqrt(-1/(4s²E0))
  const double s = 0.75, E0 = -0.5;
  const double root = virial_parabola_root(1.0, 0.0, E0, s);
  CHECK(root == Approx(std::sqrt(-1.0 / (4.0 * s * s * E0))).epsilon(1e-14));
  CHECK(std::isnan(virial_parabola_root(1.0, 0.0, 0.3, s)));
}

TEST_CASE("supercritical focusing run blows up; defocusing sibling stays bounded",
          "[blowup][slow]") {
  ModelParams p(0.75, -1.0, 1.0, 10.0);
  auto base = make_datum(RegularPart::gaussian(0.64, 1.0), p);
  auto d = scaled_datum(base, 0.12);

  GridSpec spec;
  spec.resolve_time = 8.0;
  spec.k_osc = std::max(4.0, d.regular.gaussian_k_cut() + 2.0);
  SpectralGrid grid = build_grid(p, spec);

  RegimeOptions opt;
  opt.h = 1.0 / 128.0;
  opt.horizon = 40.0;
  RegimeReport rep = run_regime(d, grid, opt, 0.12);
  INFO("E0=" << rep.E0 << " I0=" << rep.I0 << " t_vir=" << rep.t_star_virial
             << " t_thr=" << rep.t_star_threshold);
  CHECK(rep.E0 < 0.0);
  CHECK(rep.regime == "supercritical");
  REQUIRE(rep.outcome == Outcome::blow_up);
  CHECK(rep.t_star_threshold <= 2.0 * rep.t_star_virial);

  // defocusing sibling with the same regular part
  ModelParams pd(0.75, 1.0, 1.0, 10.0);
  auto dd = make_datum(d.regular, pd);
  SpectralGrid grid_d = build_grid(pd, spec);
  RegimeOptions opt_d;
  opt_d.h = 1.0 / 128.0;
  opt_d.horizon = 5.0;
  RegimeReport rep_d = run_regime(dd, grid_d, opt_d);
  CHECK(rep_d.regime == "defocusing");
  CHECK(rep_d.outcome == Outcome::global_bounded);
}

TEST_CASE("stronger focusing scaling never delays detection", "[blowup][slow]") {
  ModelParams p(0.75, -1.0, 1.0, 10.0);
  std::vector<SweepPoint> pts;
  for (double nu : {0.20, 0.12})
    pts.push_back({p, 0.64, 1.0, nu});
  RegimeOptions opt;
  opt.h = 1.0 / 128.0;
  opt.horizon = 40.0;
  auto reports = sweep(pts, opt);
  REQUIRE(reports.size() == 2);
  REQUIRE(reports[0].outcome == Outcome::blow_up);
  REQUIRE(reports[1].outcome == Outcome::blow_up);
  CHECK(reports[1].t_star_threshold <= reports[0].t_star_threshold + 1e-9);
  CHECK(reports[1].E0 < reports[0].E0);
}
