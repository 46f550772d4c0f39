#pragma once

// Adaptive Dormand-Prince 5(4) integration for small fixed-size real or complex
// systems. Every value in `stops` that lies strictly between the endpoints
// becomes a step boundary: the right-hand side is re-evaluated there, so
// piecewise-smooth coefficients are never stepped across, and the observer sees
// the exact state at that abscissa.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "resbif/error.hpp"

namespace resbif::ode {

struct Tolerance {
  double rtol = 1e-11;
  double atol = 1e-13;
};

struct Stats {
  long accepted = 0;
  long rejected = 0;
  long evaluations = 0;
};

template <typename T, std::size_t N>
using State = std::array<T, N>;

struct NoObserver {
  template <typename S>
  void operator()(double, const S&) const {}
};

namespace detail {

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

// Dormand-Prince tableau.
inline constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
inline constexpr double a21 = 1.0 / 5.0;
inline constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
inline constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
inline constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                        a54 = -212.0 / 729.0;
inline constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                        a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
inline constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                        a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
inline constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                        e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

}  // namespace detail

// Integrates y' = rhs(x, y) from x0 to x1 (either direction). The observer is
// called at x0, at every interior stop and at x1. Throws
// Error(IntegrationFailure) with the last accepted abscissa on step underflow.
template <typename T, std::size_t N, typename Rhs, typename Observer = NoObserver>
State<T, N> integrate(Rhs&& rhs, State<T, N> y, double x0, double x1, std::span<const double> stops,
                      const Tolerance& tol, Observer&& observe = {}, Stats* stats = nullptr) {
  using namespace detail;
  observe(x0, y);
  if (x0 == x1) return y;

  const double dir = x1 > x0 ? 1.0 : -1.0;
  std::vector<double> marks;
  marks.reserve(stops.size() + 1);
  for (double s : stops)
    if ((s - x0) * dir > 0.0 && (x1 - s) * dir > 0.0) marks.push_back(s);
  std::sort(marks.begin(), marks.end(), [dir](double a, double b) { return a * dir < b * dir; });
  marks.erase(std::unique(marks.begin(), marks.end(),
                          [](double a, double b) { return std::abs(a - b) <= 1e-14 * (1.0 + std::abs(a)); }),
              marks.end());
  marks.push_back(x1);

  State<T, N> k1, k2, k3, k4, k5, k6, k7, ytmp, ynew;
  auto eval = [&](double x, const State<T, N>& s, State<T, N>& out) {
    rhs(x, s, out);
    if (stats) ++stats->evaluations;
  };

  double h = 0.0;
  double x = x0;
  for (double target : marks) {
    eval(x, y, k1);
    if (h == 0.0) {
      // Initial step from the ratio of state to slope scales.
      double d0 = 0.0, d1 = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        const double sc = tol.atol + tol.rtol * magnitude(y[i]);
        d0 += std::pow(magnitude(y[i]) / sc, 2);
        d1 += std::pow(magnitude(k1[i]) / sc, 2);
      }
      d0 = std::sqrt(d0 / N);
      d1 = std::sqrt(d1 / N);
      h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
      if (!std::isfinite(h)) h = 1e-6;
      h = std::min(h, std::abs(x1 - x0));
    }
    while ((target - x) * dir > 0.0) {
      bool last = false;
      double step = h;
      if ((x + dir * step - target) * dir >= 0.0 || std::abs(target - (x + dir * step)) < 1e-12 * step) {
        step = std::abs(target - x);
        last = true;
      }
      const double hs = dir * step;
      if (!(step >= 1e-13 * std::max(1.0, std::abs(x))))
        throw Error(ErrorKind::IntegrationFailure, "step size underflow", x);

      for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + hs * (a21 * k1[i]);
      eval(x + c2 * hs, ytmp, k2);
      for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
      eval(x + c3 * hs, ytmp, k3);
      for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
      eval(x + c4 * hs, ytmp, k4);
      for (std::size_t i = 0; i < N; ++i)
        ytmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      eval(x + c5 * hs, ytmp, k5);
      for (std::size_t i = 0; i < N; ++i)
        ytmp[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
      const double xnew = last ? target : x + hs;
      eval(xnew, ytmp, k6);
      for (std::size_t i = 0; i < N; ++i)
        ynew[i] = y[i] + hs * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
      eval(xnew, ynew, k7);

      double err = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        const T e = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double sc = tol.atol + tol.rtol * std::max(magnitude(y[i]), magnitude(ynew[i]));
        err += std::pow(magnitude(e) / sc, 2);
      }
      err = std::sqrt(err / N);
      if (!std::isfinite(err)) {
        if (stats) ++stats->rejected;
        h = 0.25 * step;
        continue;
      }

      const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      if (err <= 1.0) {
        if (stats) ++stats->accepted;
        x = xnew;
        y = ynew;
        k1 = k7;
        // A truncated final step says nothing about the natural step size.
        if (!last) h = step * fac;
      } else {
        if (stats) ++stats->rejected;
        h = step * std::min(1.0, fac);
      }
    }
    observe(x, y);
  }
  return y;
}

}  // namespace resbif::ode
