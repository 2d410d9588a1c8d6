#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "fse/charge.hpp"
#include "fse/initial_data.hpp"
#include "fse/kernels.hpp"
#include "fse/spectral_grid.hpp"

namespace fse {

// Reconstruction of ψ̂(t,k), the regular part φ̂_λ(t,k), ∂_k ψ̂(t,k) and ψ(t,x)
// from a charge trajectory.
//
// Every time integral is of the form ∫_0^{t_n} e^{iΩτ} g(τ) dτ with Ω = |k|^{2s}
// arbitrarily large on the grid.  The integrand factor g is interpolated
// linearly per step and the oscillator integrated exactly (trapezoidal product
// integration), which keeps the O(h²) accuracy uniform in Ω:
//     ∫_{t_j}^{t_{j+1}} e^{iΩτ} g dτ = h e^{iΩ t_j} [c₀(θ) g_j + c₁(θ) g_{j+1}],
//     θ = Ω h,   c₀ = (e^{iθ} - 1 - iθ)/(iθ)²,   c₁ = (iθ e^{iθ} - e^{iθ} + 1)/(iθ)².

struct FilonTrap {
  complex c0, c1;
};

inline FilonTrap filon_trap(double theta) {
  if (std::abs(theta) < 0.5) {
    complex c0{}, c1{}, term{1.0, 0.0};
    for (int m = 0; m <= 12; ++m) {
      c0 += term / static_cast<double>((m + 1) * (m + 2));
      c1 += term / static_cast<double>(m + 2);
      term *= complex(0.0, theta) / static_cast<double>(m + 1);
    }
    return {c0, c1};
  }
  const complex itheta(0.0, theta);
  const complex E = std::polar(1.0, theta);
  const complex den = itheta * itheta;
  return {(E - 1.0 - itheta) / den, (itheta * E - E + 1.0) / den};
}

// Forward sweep of the Fourier-side state over the spectral grid.  Holds the
// three prefix integrals needed by the reconstruction formulas:
//   P1 = ∫ e^{iΩτ} (ṙ - iλ r) dτ   (regular part, integration by parts form)
//   P2 = ∫ e^{iΩτ} r dτ            (Duhamel form)
//   P3 = ∫ e^{iΩτ} τ r dτ          (k-derivative middle term)
class WaveEvolution {
 public:
  WaveEvolution(const InitialDatum& datum, const ChargeTrajectory& traj,
                const SpectralGrid& grid)
      : datum_(&datum), traj_(&traj), grid_(&grid), node_(0) {
    grid.require_calibrated("WaveEvolution");
    const std::size_t n = grid.size();
    const ModelParams& p = datum.params;
    omega_.resize(n);
    ghat_.resize(n);
    phi0_hat_.resize(n);
    dpsi0_hat_.resize(n);
    kf_.resize(n);
    phase_.assign(n, complex{1.0, 0.0});
    step_phase_.resize(n);
    P1_.assign(n, complex{});
    P2_.assign(n, complex{});
    P3_.assign(n, complex{});
    const double h = traj.grid.h;
    for (std::size_t i = 0; i < n; ++i) {
      const double k = grid.k[i];
      omega_[i] = std::pow(std::abs(k), 2.0 * p.s);
      ghat_[i] = kernels::green_hat(k, p);
      phi0_hat_[i] = datum.regular.fhat(k, p.s);
      dpsi0_hat_[i] = datum.dpsi0_hat(k);
      kf_[i] = filon_trap(omega_[i] * h);
      step_phase_[i] = std::polar(1.0, omega_[i] * h);
    }
  }

  int node() const { return node_; }
  double time() const { return traj_->grid.t(node_); }
  complex q() const { return traj_->q[node_]; }
  complex r() const { return traj_->r[node_]; }
  const SpectralGrid& grid() const { return *grid_; }
  const InitialDatum& datum() const { return *datum_; }
  const ChargeTrajectory& trajectory() const { return *traj_; }

  // advance the prefix integrals by one time step
  void advance() {
    const int j = node_;
    if (j + 1 > traj_->n_last) throw std::out_of_range("WaveEvolution: past trajectory end");
    const double h = traj_->grid.h;
    const double tj = traj_->grid.t(j);
    const ModelParams& p = datum_->params;
    const complex ilam(0.0, p.lambda);
    const complex g1a = traj_->r_dot[j] - ilam * traj_->r[j];
    const complex g1b = traj_->r_dot[j + 1] - ilam * traj_->r[j + 1];
    const complex g2a = traj_->r[j], g2b = traj_->r[j + 1];
    const complex g3a = tj * traj_->r[j], g3b = (tj + h) * traj_->r[j + 1];
    const std::size_t n = grid_->size();
    for (std::size_t i = 0; i < n; ++i) {
      const complex w = h * phase_[i];
      P1_[i] += w * (kf_[i].c0 * g1a + kf_[i].c1 * g1b);
      P2_[i] += w * (kf_[i].c0 * g2a + kf_[i].c1 * g2b);
      P3_[i] += w * (kf_[i].c0 * g3a + kf_[i].c1 * g3b);
      phase_[i] *= step_phase_[i];
    }
    ++node_;
    if (node_ % 1024 == 0)
      for (auto& ph : phase_) ph /= std::abs(ph);
  }

  void advance_to(int n) {
    if (n < node_) throw std::invalid_argument("WaveEvolution: cannot rewind");
    while (node_ < n) advance();
  }

  // φ̂_λ(t_n, k_i) = e^{-iΩt}(φ̂_{λ,0} + Ĝ P1)
  complex phi_hat(std::size_t i) const {
    return back_phase(i) * (phi0_hat_[i] + ghat_[i] * P1_[i]);
  }
  // ψ̂ = φ̂_λ - r(t) Ĝ
  complex psi_hat(std::size_t i) const { return phi_hat(i) - r() * ghat_[i]; }

  // ∂_k ψ̂ = -i 2s t |k|^{2s-1}sgn(k) ψ̂ + (2s|k|^{2s-1}sgn(k)/√(2π)) e^{-iΩt} P3
  //         + e^{-iΩt} ∂_kψ̂₀
  complex dk_psi_hat(std::size_t i) const {
    const double k = grid_->k[i];
    const double s = datum_->params.s;
    const double kk = k == 0.0 ? 0.0
                               : 2.0 * s * std::pow(std::abs(k), 2.0 * s - 1.0) *
                                     ((k > 0) - (k < 0));
    const complex bp = back_phase(i);
    return complex(0.0, -kk * time()) * psi_hat(i) +
           kk / std::sqrt(2.0 * M_PI) * bp * P3_[i] + bp * dpsi0_hat_[i];
  }

  // Duhamel-form ψ̂ (time integral of r against the propagator); used as the
  // second route in cross-checks.
  complex psi_hat_duhamel(std::size_t i) const {
    const complex psi0 = phi0_hat_[i] - datum_->r0() * ghat_[i];
    return back_phase(i) *
           (psi0 - kernels::I / std::sqrt(2.0 * M_PI) * P2_[i]);
  }

  std::vector<complex> psi_hat_all() const {
    std::vector<complex> v(grid_->size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = psi_hat(i);
    return v;
  }
  std::vector<complex> phi_hat_all() const {
    std::vector<complex> v(grid_->size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = phi_hat(i);
    return v;
  }
  std::vector<complex> dk_psi_hat_all() const {
    std::vector<complex> v(grid_->size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = dk_psi_hat(i);
    return v;
  }

  // ψ(t, x): regular part by grid quadrature, singular part from the pointwise
  // Green's profile.
  complex psi_at(double x) const {
    complex acc{};
    for (std::size_t i = 0; i < grid_->size(); ++i)
      acc += grid_->w[i] * phi_hat(i) * std::polar(1.0, grid_->k[i] * x);
    acc /= std::sqrt(2.0 * M_PI);
    return acc - r() * kernels::green_profile_at(x, datum_->params);
  }

  double omega(std::size_t i) const { return omega_[i]; }
  double ghat(std::size_t i) const { return ghat_[i]; }

 private:
  complex back_phase(std::size_t i) const { return std::conj(phase_[i]); }

  const InitialDatum* datum_;
  const ChargeTrajectory* traj_;
  const SpectralGrid* grid_;
  int node_;
  std::vector<double> omega_, ghat_;
  std::vector<complex> phi0_hat_, dpsi0_hat_, phase_, step_phase_, P1_, P2_, P3_;
  std::vector<FilonTrap> kf_;
};

// --- pointwise reference routes (per (t_n, k), O(n) each) ---------------------

namespace detail {
template <class G>
complex filon_prefix(const ChargeTrajectory& traj, int n, double Omega, G&& g) {
  const double h = traj.grid.h;
  const FilonTrap f = filon_trap(Omega * h);
  complex acc{};
  for (int j = 0; j < n; ++j)
    acc += h * std::polar(1.0, Omega * traj.grid.t(j)) * (f.c0 * g(j) + f.c1 * g(j + 1));
  return acc;
}
}  // namespace detail

// Three-term Duhamel form of ψ̂(t_n, k).
inline complex psi_hat_direct(const InitialDatum& d, const ChargeTrajectory& traj, int n,
                              double k) {
  const double Omega = std::pow(std::abs(k), 2.0 * d.params.s);
  const complex P2 =
      detail::filon_prefix(traj, n, Omega, [&](int j) { return traj.r[j]; });
  const complex psi0 = d.psi0_hat(k);
  return std::polar(1.0, -Omega * traj.grid.t(n)) *
         (psi0 - kernels::I / std::sqrt(2.0 * M_PI) * P2);
}

// Regular part φ̂_λ(t_n, k) of the integration-by-parts form.
inline complex regular_part_hat(const InitialDatum& d, const ChargeTrajectory& traj, int n,
                                double k) {
  const ModelParams& p = d.params;
  const double Omega = std::pow(std::abs(k), 2.0 * p.s);
  const complex ilam(0.0, p.lambda);
  const complex P1 = detail::filon_prefix(
      traj, n, Omega, [&](int j) { return traj.r_dot[j] - ilam * traj.r[j]; });
  return std::polar(1.0, -Omega * traj.grid.t(n)) *
         (d.regular.fhat(k, p.s) + kernels::green_hat(k, p) * P1);
}

inline complex psi_hat_byparts(const InitialDatum& d, const ChargeTrajectory& traj, int n,
                               double k) {
  return regular_part_hat(d, traj, n, k) - traj.r[n] * kernels::green_hat(k, d.params);
}

// ∂_k ψ̂(t_n, k) from the closed three-term formula.
inline complex dk_psi_hat_point(const InitialDatum& d, const ChargeTrajectory& traj, int n,
                                double k) {
  const ModelParams& p = d.params;
  const double Omega = std::pow(std::abs(k), 2.0 * p.s);
  const double t = traj.grid.t(n);
  const double kk =
      k == 0.0 ? 0.0 : 2.0 * p.s * std::pow(std::abs(k), 2.0 * p.s - 1.0) * ((k > 0) - (k < 0));
  const complex P3 = detail::filon_prefix(
      traj, n, Omega, [&](int j) { return traj.grid.t(j) * traj.r[j]; });
  const complex bp = std::polar(1.0, -Omega * t);
  return complex(0.0, -kk * t) * psi_hat_byparts(d, traj, n, k) +
         kk / std::sqrt(2.0 * M_PI) * bp * P3 + bp * d.dpsi0_hat(k);
}

}  // namespace fse
