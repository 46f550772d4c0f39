#include "resbif/glue.hpp"

#include <algorithm>
#include <cmath>

#include "resbif/error.hpp"

namespace resbif {

double soliton(double z, double E) {
  const double a = std::sqrt(-E);
  return std::sqrt(2.0) * a / std::cosh(a * z);
}

double soliton_derivative(double z, double E) {
  const double a = std::sqrt(-E);
  return -a * std::tanh(a * z) * soliton(z, E);
}

namespace {

// 1 - tanh(z) without cancellation.
double one_minus_tanh(double z) { return 2.0 / (1.0 + std::exp(2.0 * z)); }

}  // namespace

TailMatch match_boundary(double x_b, double psi, double dpsi, double E, GlueSide side) {
  if (!(E < 0.0)) throw Error(ErrorKind::LogDerivOutOfRange, "tails need E < 0", E);
  if (psi == 0.0) throw Error(ErrorKind::ZeroBoundaryValue, "psi vanishes at the matching point", x_b);
  const double a = std::sqrt(-E);
  // On the left the outward direction is reversed; mirror to a right match.
  const double L = side == GlueSide::Right ? dpsi / psi : -dpsi / psi;
  double r = -L / a;
  if (std::abs(r) > 1.0 + 1e-8)
    throw Error(ErrorKind::LogDerivOutOfRange, "|psi'/psi| exceeds sqrt(-E)", x_b);
  r = std::clamp(r, -(1.0 - 1e-14), 1.0 - 1e-14);
  double y;
  if (std::abs(r) <= 0.9) {
    y = std::atanh(r) / a;
  } else {
    const double ratio = std::min(std::abs(psi) / (std::sqrt(2.0) * a), 1.0);
    y = std::acosh(1.0 / ratio) / a;
    if (r < 0.0) y = -y;
  }
  TailMatch m;
  m.sign = psi > 0.0 ? 1 : -1;
  m.center = side == GlueSide::Right ? x_b - y : x_b + y;
  return m;
}

TailMatch match_tail(const InnerSolution& inner, GlueSide side) {
  const double s = std::sqrt(inner.eps);
  if (side == GlueSide::Right)
    return match_boundary(inner.grid.back(), s * inner.u_right(), s * inner.up_right(), inner.E, side);
  return match_boundary(inner.grid.front(), s * inner.u_left(), s * inner.up_left(), inner.E, side);
}

double tail_mass(double E, double from_x, double center) {
  const double a = std::sqrt(-E);
  return 2.0 * a * one_minus_tanh(a * (from_x - center));
}

double tail_gradient_mass(double E, double from_x, double center) {
  const double a = std::sqrt(-E);
  const double z = a * (from_x - center);
  const double t = std::tanh(z);
  return 2.0 * a * a * a * one_minus_tanh(z) * (1.0 + t + t * t) / 3.0;
}

double glued_mass(double E, double eps, double int_u2, double b, double x_L, double x_R) {
  return eps * int_u2 + tail_mass(E, b, x_R) + tail_mass(E, b, -x_L);
}

double JumpResiduals::max() const { return std::max({psi_jump_b, dpsi_jump_b, psi_jump_mb, dpsi_jump_mb}); }

GluedState assemble(const InnerSolution& inner, double b) {
  GluedState g;
  g.E = inner.E;
  g.eps = inner.eps;
  g.b = b;
  g.inner = inner;
  const TailMatch right = match_tail(inner, GlueSide::Right);
  const TailMatch left = match_tail(inner, GlueSide::Left);
  g.x_R = right.center;
  g.sign_R = right.sign;
  g.x_L = left.center;
  g.sign_L = left.sign;
  g.N = glued_mass(g.E, g.eps, inner.int_u2, b, g.x_L, g.x_R);
  g.H1 = g.eps * (inner.int_u2 + inner.int_up2) + tail_mass(g.E, b, g.x_R) + tail_mass(g.E, b, -g.x_L) +
         tail_gradient_mass(g.E, b, g.x_R) + tail_gradient_mass(g.E, b, -g.x_L);

  const double s = std::sqrt(g.eps);
  const double a = std::sqrt(-g.E);
  const double pr = s * inner.u_right(), dpr = s * inner.up_right();
  const double pl = s * inner.u_left(), dpl = s * inner.up_left();
  g.residuals.psi_jump_b = std::abs(pr - g.sign_R * soliton(b - g.x_R, g.E)) / std::abs(pr);
  g.residuals.dpsi_jump_b = std::abs(dpr - g.sign_R * soliton_derivative(b - g.x_R, g.E)) / (std::abs(pr) * a);
  g.residuals.psi_jump_mb = std::abs(pl - g.sign_L * soliton(-b - g.x_L, g.E)) / std::abs(pl);
  g.residuals.dpsi_jump_mb = std::abs(dpl - g.sign_L * soliton_derivative(-b - g.x_L, g.E)) / (std::abs(pl) * a);
  return g;
}

double GluedState::psi(double x) const {
  if (x >= b) return sign_R * soliton(x - x_R, E);
  if (x <= -b) return sign_L * soliton(x - x_L, E);
  const auto& xs = inner.grid;
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t i = std::clamp<std::size_t>(static_cast<std::size_t>(it - xs.begin()), 1, xs.size() - 1) - 1;
  const double h = xs[i + 1] - xs[i];
  const double t = (x - xs[i]) / h;
  const double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
  const double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
  const double u = h00 * inner.u[i] + h10 * h * inner.u_prime[i] + h01 * inner.u[i + 1] + h11 * h * inner.u_prime[i + 1];
  return std::sqrt(eps) * u;
}

double GluedState::dpsi(double x) const {
  if (x >= b) return sign_R * soliton_derivative(x - x_R, E);
  if (x <= -b) return sign_L * soliton_derivative(x - x_L, E);
  const auto& xs = inner.grid;
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t i = std::clamp<std::size_t>(static_cast<std::size_t>(it - xs.begin()), 1, xs.size() - 1) - 1;
  const double h = xs[i + 1] - xs[i];
  const double t = (x - xs[i]) / h;
  const double d00 = 6 * t * t - 6 * t, d10 = 3 * t * t - 4 * t + 1;
  const double d01 = -6 * t * t + 6 * t, d11 = 3 * t * t - 2 * t;
  const double du = (d00 * inner.u[i] + d01 * inner.u[i + 1]) / h + d10 * inner.u_prime[i] + d11 * inner.u_prime[i + 1];
  return std::sqrt(eps) * du;
}

double GluedState::amplitude() const {
  const double s = std::sqrt(eps);
  double amp = 0.0;
  for (double u : inner.u) amp = std::max(amp, s * std::abs(u));
  const double peak = std::sqrt(-2.0 * E);
  if (x_R > b || x_L < -b) amp = std::max(amp, peak);
  return amp;
}

GlobalResidual global_residual(const PotentialSpec& spec, const GluedState& state) {
  GlobalResidual out;
  out.amplitude = state.amplitude();
  const double E = state.E;
  const double s = std::sqrt(state.eps);
  const auto& xs = state.inner.grid;
  const auto& us = state.inner.u;
  const auto bps = spec.interior_breakpoints();
  auto crosses = [&](double lo, double hi) {
    for (double p : bps)
      if (p > lo && p < hi) return true;
    return false;
  };
  // Sixth-order central second difference.
  auto second = [](double m3, double m2, double m1, double c, double p1, double p2, double p3, double h) {
    return (2.0 * (m3 + p3) - 27.0 * (m2 + p2) + 270.0 * (m1 + p1) - 490.0 * c) / (180.0 * h * h);
  };
  for (std::size_t i = 3; i + 3 < xs.size(); ++i) {
    const double h = xs[i + 1] - xs[i];
    bool uniform = true;
    for (std::size_t j = i - 3; j < i + 3; ++j)
      if (std::abs((xs[j + 1] - xs[j]) - h) > 1e-9 * h) uniform = false;
    if (!uniform || crosses(xs[i - 3], xs[i + 3])) continue;
    if (std::find(bps.begin(), bps.end(), xs[i]) != bps.end()) continue;
    const double p0 = s * us[i];
    const double d2 = s * second(us[i - 3], us[i - 2], us[i - 1], us[i], us[i + 1], us[i + 2], us[i + 3], h);
    const double r = -d2 + spec(xs[i]) * p0 - p0 * p0 * p0 - E * p0;
    out.sup = std::max(out.sup, std::abs(r));
  }
  // Tails: V = 0 beyond +-b.
  const double a = std::sqrt(-E);
  const double h = std::min(0.01, 0.01 / a);
  const double reach = std::max(30.0 / a, std::max(std::abs(state.x_R), std::abs(state.x_L)) + 10.0 / a);
  const int m = std::min(4000, static_cast<int>(reach / h));
  for (int side = -1; side <= 1; side += 2) {
    for (int j = 3; j + 3 <= m; ++j) {
      const double x = side * (state.b + j * h);
      const double p0 = state.psi(x);
      const double d2 = second(state.psi(x - 3 * h), state.psi(x - 2 * h), state.psi(x - h), p0, state.psi(x + h),
                               state.psi(x + 2 * h), state.psi(x + 3 * h), h);
      const double r = -d2 - p0 * p0 * p0 - E * p0;
      out.sup = std::max(out.sup, std::abs(r));
    }
  }
  return out;
}

nlohmann::json profile_json(const GluedState& state) {
  nlohmann::json j;
  j["E"] = state.E;
  j["eps"] = state.eps;
  j["x_L"] = state.x_L;
  j["x_R"] = state.x_R;
  j["signs"] = {state.sign_L, state.sign_R};
  j["N"] = state.N;
  j["H1"] = state.H1;
  std::vector<double> grid, psi;
  const double a = std::sqrt(-state.E);
  const double reach = std::max(10.0 / a, std::max(std::abs(state.x_R), std::abs(state.x_L)) - state.b + 5.0 / a);
  constexpr int tail_points = 200;
  for (int i = tail_points; i >= 1; --i) grid.push_back(-state.b - reach * i / tail_points);
  const double s = std::sqrt(state.eps);
  for (std::size_t i = 0; i < state.inner.grid.size(); ++i) grid.push_back(state.inner.grid[i]);
  for (int i = 1; i <= tail_points; ++i) grid.push_back(state.b + reach * i / tail_points);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const bool inside = i >= tail_points && i < tail_points + state.inner.grid.size();
    psi.push_back(inside ? s * state.inner.u[i - tail_points] : state.psi(grid[i]));
  }
  j["grid"] = grid;
  j["psi"] = psi;
  return j;
}

}  // namespace resbif
