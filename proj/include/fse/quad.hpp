#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <queue>
#include <stdexcept>
#include <vector>

namespace fse::quad {

using complex = std::complex<double>;

struct Rule {
  std::vector<double> x;  // nodes on [-1, 1]
  std::vector<double> w;  // weights
};

// Gauss-Legendre rule of order n, computed by Newton iteration on P_n and
// cached per order.
inline const Rule& gauss_legendre(int n) {
  static std::map<int, Rule> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  if (n < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");

  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    r.x[i] = -z;
    r.x[n - 1 - i] = z;
    r.w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    r.w[n - 1 - i] = r.w[i];
  }
  return cache.emplace(n, std::move(r)).first->second;
}

// Fixed Gauss-Legendre quadrature of f over [a, b].
template <class F>
auto gl_integrate(F&& f, double a, double b, int order = 24) {
  const Rule& r = gauss_legendre(order);
  const double c = 0.5 * (a + b), hl = 0.5 * (b - a);
  auto acc = decltype(f(c)){};
  for (std::size_t i = 0; i < r.x.size(); ++i) acc += r.w[i] * f(c + hl * r.x[i]);
  return acc * hl;
}

namespace detail {
// 15-point Kronrod nodes with embedded 7-point Gauss rule (QUADPACK values).
inline constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
inline constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

template <class F>
void gk15(F&& f, double a, double b, complex& kronrod, double& err) {
  const double c = 0.5 * (a + b), hl = 0.5 * (b - a);
  complex fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - hl * kXgk[i]);
    fv[14 - i] = f(c + hl * kXgk[i]);
  }
  fv[7] = f(c);
  complex resk = kWgk[7] * fv[7];
  complex resg = kWg[3] * fv[7];
  for (int i = 0; i < 7; ++i) resk += kWgk[i] * (fv[i] + fv[14 - i]);
  for (int i = 0; i < 3; ++i) resg += kWg[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
  kronrod = resk * hl;
  err = std::abs(resk - resg) * std::abs(hl);
}
}  // namespace detail

struct AdaptiveResult {
  complex value{};
  double error = 0.0;
  bool converged = false;
};

// Globally adaptive Gauss-Kronrod 15(7) with bisection of the segment
// carrying the largest error estimate.  `initial_segments` pre-splits the
// interval, which matters for integrands with many oscillations.
template <class F>
AdaptiveResult integrate_gk(F&& f, double a, double b, double abs_tol = 1e-12,
                            double rel_tol = 1e-10, int max_segments = 4000,
                            int initial_segments = 1) {
  struct Seg {
    double a, b, err;
    complex val;
    bool operator<(const Seg& o) const { return err < o.err; }
  };
  std::priority_queue<Seg> heap;
  complex total{};
  double total_err = 0.0;
  initial_segments = std::max(1, initial_segments);
  for (int i = 0; i < initial_segments; ++i) {
    double sa = a + (b - a) * i / initial_segments;
    double sb = a + (b - a) * (i + 1) / initial_segments;
    Seg s{sa, sb, 0.0, {}};
    detail::gk15(f, sa, sb, s.val, s.err);
    total += s.val;
    total_err += s.err;
    heap.push(s);
  }
  int n_seg = initial_segments;
  auto tol = [&] { return std::max(abs_tol, rel_tol * std::abs(total)); };
  while (total_err > tol() && n_seg < max_segments) {
    Seg worst = heap.top();
    heap.pop();
    double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) break;  // interval exhausted
    Seg l{worst.a, mid, 0.0, {}}, r{mid, worst.b, 0.0, {}};
    detail::gk15(f, l.a, l.b, l.val, l.err);
    detail::gk15(f, r.a, r.b, r.val, r.err);
    total += l.val + r.val - worst.val;
    total_err += l.err + r.err - worst.err;
    heap.push(l);
    heap.push(r);
    ++n_seg;
  }
  return {total, total_err, total_err <= tol()};
}

// Wynn's epsilon algorithm on a sequence of partial sums.  Returns the best
// even-column estimate; err_out receives the spread of the last diagonal.
inline complex wynn_limit(const std::vector<complex>& sums, double* err_out = nullptr) {
  const std::size_t n = sums.size();
  if (n == 0) throw std::invalid_argument("wynn_limit: empty sequence");
  std::vector<complex> prev(n + 1, complex{0.0, 0.0});  // ε_{-1}
  std::vector<complex> curr(sums);                      // ε_0
  complex best = sums.back();
  complex prev_best = n > 1 ? sums[n - 2] : sums.back();
  for (std::size_t k = 0; k + 1 < n; ++k) {
    std::vector<complex> next(curr.size() - 1);
    bool bail = false;
    for (std::size_t j = 0; j + 1 < curr.size(); ++j) {
      complex d = curr[j + 1] - curr[j];
      if (std::abs(d) < 1e-305) {
        bail = true;
        best = curr[j + 1];
        break;
      }
      next[j] = prev[j + 1] + 1.0 / d;
    }
    if (bail) break;
    prev = std::move(curr);
    curr = std::move(next);
    if (k % 2 == 1) {  // even ε-column reached
      prev_best = best;
      best = curr.back();
    }
  }
  if (err_out) *err_out = std::abs(best - prev_best);
  return best;
}

// Richardson elimination for limits f(x) as x -> 0 with a known ladder of
// correction exponents: f(x) = L + c_0 x^{p_0} + c_1 x^{p_1} + ...
// `values` holds f at x_0, x_0/2, x_0/4, ...
inline double richardson_limit(std::vector<double> values, const std::vector<double>& exponents,
                               double* err_out = nullptr) {
  if (values.size() < 2) throw std::invalid_argument("richardson_limit: need >= 2 values");
  double last_diff = std::abs(values.back() - values[values.size() - 2]);
  std::size_t stage = 0;
  while (values.size() > 1 && stage < exponents.size()) {
    double f = std::pow(2.0, exponents[stage]);
    std::vector<double> next(values.size() - 1);
    for (std::size_t j = 0; j + 1 < values.size(); ++j)
      next[j] = (f * values[j + 1] - values[j]) / (f - 1.0);
    last_diff = std::abs(next.back() - values.back());
    values = std::move(next);
    ++stage;
  }
  if (err_out) *err_out = last_diff;
  return values.back();
}

// cis(θ) - 1 without cancellation for small θ.
inline complex cis_minus_one(double theta) {
  double sh = std::sin(0.5 * theta);
  return complex(-2.0 * sh * sh, std::sin(theta));
}

}  // namespace fse::quad
