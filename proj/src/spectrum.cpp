#include "resbif/spectrum.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "resbif/kernels.hpp"
#include "resbif/nlsolve.hpp"

namespace resbif {

const char* to_string(SpectralClass cls) {
  switch (cls) {
    case SpectralClass::BoundStatePole: return "BoundStatePole";
    case SpectralClass::AntiBoundState: return "AntiBoundState";
    case SpectralClass::ComplexResonance: return "ComplexResonance";
    case SpectralClass::TransmissionResonance: return "TransmissionResonance";
    case SpectralClass::ThresholdResonance: return "ThresholdResonance";
  }
  return "unknown";
}

const char* to_string(Parity parity) {
  switch (parity) {
    case Parity::None: return "None";
    case Parity::Even: return "Even";
    case Parity::Odd: return "Odd";
  }
  return "unknown";
}

bool on_axis(cplx k) { return std::abs(k.real()) < 1e-6 * (1.0 + std::abs(k)); }

SpectralClass classify(Target target, cplx k) {
  if (target != Target::W) return SpectralClass::TransmissionResonance;
  if (!on_axis(k)) return SpectralClass::ComplexResonance;
  return k.imag() > 0.0 ? SpectralClass::BoundStatePole : SpectralClass::AntiBoundState;
}

namespace {

constexpr int kGaussNodes = 32;

struct GaussRule {
  std::array<double, kGaussNodes> x{}, w{};
};

const GaussRule& gauss_rule() {
  static const GaussRule rule = [] {
    GaussRule r;
    const int n = kGaussNodes;
    for (int i = 0; i < n; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        const double p = std::legendre(n, x);
        dp = n * (x * p - std::legendre(n - 1, x)) / (x * x - 1.0);
        const double dx = p / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      dp = n * (x * std::legendre(n, x) - std::legendre(n - 1, x)) / (x * x - 1.0);
      r.x[i] = x;
      r.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
  }();
  return rule;
}

struct Contour {
  cplx n0;  // (1/2 pi i) closed integral of g'/g
  cplx n1;  // (1/2 pi i) closed integral of z g'/g
  bool boundary_zero = false;
};

Contour contour_integral(const PotentialSpec& spec, Target target, const Box& box, int panels,
                         const SpectrumOptions& opts) {
  const GaussRule& rule = gauss_rule();
  const std::array<cplx, 5> corners{cplx(box.re_min, box.im_min), cplx(box.re_max, box.im_min),
                                    cplx(box.re_max, box.im_max), cplx(box.re_min, box.im_max),
                                    cplx(box.re_min, box.im_min)};
  std::vector<cplx> nodes;
  std::vector<cplx> weights;
  nodes.reserve(4 * panels * kGaussNodes);
  for (int e = 0; e < 4; ++e) {
    const cplx a = corners[e], b = corners[e + 1];
    const cplx d = (b - a) / static_cast<double>(panels);
    for (int p = 0; p < panels; ++p) {
      const cplx pa = a + static_cast<double>(p) * d;
      for (int i = 0; i < kGaussNodes; ++i) {
        nodes.push_back(pa + 0.5 * (rule.x[i] + 1.0) * d);
        weights.push_back(0.5 * rule.w[i] * d);
      }
    }
  }
  const auto vals = kernels::target_parallel(spec, target, nodes, opts.tol, opts.jobs);
  Contour c;
  cplx s0 = 0.0, s1 = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!(std::abs(vals[i].value) > 1e-8 * vals[i].scale)) c.boundary_zero = true;
    const cplx r = vals[i].derivative / vals[i].value * weights[i];
    s0 += r;
    s1 += nodes[i] * r;
  }
  const cplx two_pi_i(0.0, 2.0 * std::numbers::pi);
  c.n0 = s0 / two_pi_i;
  c.n1 = s1 / two_pi_i;
  return c;
}

struct CountResult {
  int count = 0;
  cplx moment;
  bool ok = false;
};

// Refines the composite rule until the winding number is within 0.05 of an
// integer and agrees with the previous level.
CountResult count_once(const PotentialSpec& spec, Target target, const Box& box, const SpectrumOptions& opts) {
  CountResult res;
  long previous = -1;
  for (int panels = 1; panels <= 256; panels *= 2) {
    const Contour c = contour_integral(spec, target, box, panels, opts);
    if (c.boundary_zero) return res;
    const double v = c.n0.real();
    const long rounded = std::lround(v);
    const bool near = std::abs(v - rounded) < 0.05 && std::abs(c.n0.imag()) < 0.05;
    if (near && rounded == previous) {
      res.count = static_cast<int>(rounded);
      res.moment = c.n1;
      res.ok = true;
      return res;
    }
    previous = near ? rounded : -1;
  }
  throw Error(ErrorKind::IntegrationFailure, "argument principle quadrature did not settle");
}

Box inflate(const Box& b, double f) {
  const double dx = 0.5 * f * (b.re_max - b.re_min), dy = 0.5 * f * (b.im_max - b.im_min);
  return {b.re_min - dx, b.re_max + dx, b.im_min - dy, b.im_max + dy};
}

SpectralPoint make_point(Target target, cplx k, const TargetValue& v) {
  SpectralPoint p;
  p.k_star = k;
  p.target = target;
  p.cls = classify(target, k);
  p.residual = std::abs(v.value);
  p.scale = v.scale;
  p.derivative_abs = std::abs(v.derivative);
  p.simple = p.derivative_abs > 1e-6 * v.scale;
  return p;
}

// Newton on the axis restriction, kept inside [lo, hi] when a bracket is known.
SpectralPoint polish_axis(const PotentialSpec& spec, Target target, double kappa, double lo, double hi,
                          const ode::Tolerance& tol) {
  AxisValue v = evaluate_target_axis(spec, target, kappa, tol);
  const bool lo_positive = lo < hi && evaluate_target_axis(spec, target, lo, tol).value > 0.0;
  bool converged = false;
  for (int it = 0; it < 50; ++it) {
    if (v.value == 0.0) {
      converged = true;
      break;
    }
    double step = -v.value / v.derivative;
    double next = kappa + step;
    if (!(next >= lo && next <= hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    const AxisValue nv = evaluate_target_axis(spec, target, next, tol);
    // Maintain the bracket.
    if ((nv.value > 0.0) == lo_positive) lo = next;
    else hi = next;
    const double dk = std::abs(next - kappa);
    kappa = next;
    v = nv;
    if (dk < 1e-12) {
      converged = true;
      break;
    }
  }
  TargetValue tv{v.value, v.derivative, v.scale};
  SpectralPoint p = make_point(target, cplx(0.0, kappa), tv);
  p.converged = converged;
  return p;
}

SpectralPoint polish_complex(const PotentialSpec& spec, Target target, cplx k, const ode::Tolerance& tol) {
  TargetValue v = evaluate_target(spec, target, k, tol);
  bool converged = false;
  for (int it = 0; it < 60; ++it) {
    if (v.value == cplx(0.0)) break;
    const cplx step = -v.value / v.derivative;
    k += step;
    v = evaluate_target(spec, target, k, tol);
    if (std::abs(step) < 1e-14 * (1.0 + std::abs(k))) {
      converged = true;
      break;
    }
  }
  if (std::abs(v.value) < 1e-10 * v.scale) converged = true;
  if (on_axis(k)) {
    const double kappa = k.imag();
    const double h = 1e-6 * (1.0 + std::abs(kappa));
    AxisValue lo = evaluate_target_axis(spec, target, kappa - h, tol);
    AxisValue hi = evaluate_target_axis(spec, target, kappa + h, tol);
    if ((lo.value > 0.0) != (hi.value > 0.0)) return polish_axis(spec, target, kappa, kappa - h, kappa + h, tol);
    k = cplx(0.0, kappa);
    v = evaluate_target(spec, target, k, tol);
  }
  SpectralPoint p = make_point(target, k, v);
  p.converged = converged;
  return p;
}

void sort_points(std::vector<SpectralPoint>& pts) {
  std::sort(pts.begin(), pts.end(), [](const SpectralPoint& a, const SpectralPoint& b) {
    if (a.k_star.imag() != b.k_star.imag()) return a.k_star.imag() < b.k_star.imag();
    return a.k_star.real() < b.k_star.real();
  });
}

void subdivide(const PotentialSpec& spec, Target target, const Box& box, const CountResult& count, int depth,
               int max_depth, const SpectrumOptions& opts, std::vector<SpectralPoint>& out, bool& incomplete) {
  if (count.count <= 0) return;
  if (count.count == 1) {
    SpectralPoint p = polish_complex(spec, target, count.moment, opts.tol);
    const Box near = inflate(box, 0.02);
    if (!(p.k_star.real() >= near.re_min && p.k_star.real() <= near.re_max && p.k_star.imag() >= near.im_min &&
          p.k_star.imag() <= near.im_max)) {
      // Newton left the box; keep the quadrature estimate.
      p = make_point(target, count.moment, evaluate_target(spec, target, count.moment, opts.tol));
      p.converged = false;
    }
    out.push_back(p);
    return;
  }
  if (depth >= max_depth) {
    incomplete = true;
    return;
  }
  const bool split_re = (box.re_max - box.re_min) >= (box.im_max - box.im_min);
  for (double f : {0.5137, 0.45, 0.55, 0.4, 0.6, 0.35, 0.65}) {
    Box a = box, b = box;
    if (split_re) {
      const double cut = box.re_min + f * (box.re_max - box.re_min);
      a.re_max = cut;
      b.re_min = cut;
    } else {
      const double cut = box.im_min + f * (box.im_max - box.im_min);
      a.im_max = cut;
      b.im_min = cut;
    }
    const CountResult ca = count_once(spec, target, a, opts);
    if (!ca.ok) continue;
    const CountResult cb = count_once(spec, target, b, opts);
    if (!cb.ok || ca.count + cb.count != count.count) continue;
    subdivide(spec, target, a, ca, depth + 1, max_depth, opts, out, incomplete);
    subdivide(spec, target, b, cb, depth + 1, max_depth, opts, out, incomplete);
    return;
  }
  incomplete = true;
}

}  // namespace

namespace {
constexpr double kNoiseFloor = 1e-9;
}  // namespace

std::vector<SpectralPoint> scan_axis(const PotentialSpec& spec, Target target, double kappa_min, double kappa_max,
                                     int n_grid, const SpectrumOptions& opts) {
  if (!(kappa_min < kappa_max) || n_grid < 2) throw Error(ErrorKind::Config, "scan_axis needs kappa_min < kappa_max and n_grid >= 2");
  std::vector<double> grid;
  for (int i = 0; i < n_grid; ++i) {
    const double k = kappa_min + (kappa_max - kappa_min) * i / (n_grid - 1);
    if (std::abs(k) >= opts.axis_exclusion) grid.push_back(k);
  }
  const auto vals = kernels::axis_parallel(spec, target, grid, opts.tol, opts.jobs);
  std::vector<SpectralPoint> out;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    double lo = grid[i], hi = grid[i + 1];
    if ((lo < 0.0) != (hi < 0.0)) continue;  // the excluded hole around 0
    double flo = vals[i].value, fhi = vals[i + 1].value;
    // Both ends at rounding level: the target vanishes identically here
    // (s- of an empty potential), not at an isolated zero.
    if (std::max(std::abs(flo) / vals[i].scale, std::abs(fhi) / vals[i + 1].scale) < kNoiseFloor) continue;
    if (flo == 0.0) {
      out.push_back(polish_axis(spec, target, lo, lo, lo, opts.tol));
      continue;
    }
    if (!((flo > 0.0) != (fhi > 0.0)) || fhi == 0.0) continue;
    for (int it = 0; it < 30 && hi - lo > 1e-9 * (1.0 + std::abs(lo)); ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = evaluate_target_axis(spec, target, mid, opts.tol).value;
      if (fm == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((fm > 0.0) == (flo > 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    out.push_back(polish_axis(spec, target, 0.5 * (lo + hi), lo, hi, opts.tol));
  }
  if (!grid.empty() && vals.back().value == 0.0 && grid.size() > 1 &&
      std::abs(vals[grid.size() - 2].value) / vals[grid.size() - 2].scale >= kNoiseFloor)
    out.push_back(polish_axis(spec, target, grid.back(), grid.back(), grid.back(), opts.tol));
  sort_points(out);
  return out;
}

int count_zeros_box(const PotentialSpec& spec, Target target, const Box& box, const SpectrumOptions& opts) {
  Box b = box;
  for (int attempt = 0; attempt <= 3; ++attempt) {
    const CountResult c = count_once(spec, target, b, opts);
    if (c.ok) return c.count;
    b = inflate(b, 0.01);
  }
  throw Error(ErrorKind::BoundaryZero, "target vanishes on the box boundary");
}

std::vector<SpectralPoint> locate_complex_zeros(const PotentialSpec& spec, Target target, const Box& box,
                                                int max_depth, const SpectrumOptions& opts) {
  Box b = box;
  CountResult c;
  for (int attempt = 0; attempt <= 3 && !c.ok; ++attempt) {
    c = count_once(spec, target, b, opts);
    if (!c.ok) b = inflate(b, 0.01);
  }
  if (!c.ok) throw Error(ErrorKind::BoundaryZero, "target vanishes on the box boundary");
  std::vector<SpectralPoint> out;
  bool incomplete = false;
  subdivide(spec, target, b, c, 0, max_depth, opts, out, incomplete);
  sort_points(out);
  if (incomplete) throw DepthExceededError(std::move(out));
  return out;
}

namespace {

struct ZeroEnergyMode {
  double u_right = 0.0, int_u2 = 0.0, int_u4 = 0.0;
  double parity_defect_even = 0.0, parity_defect_odd = 0.0;
};

// U'' = V U from -b with U(-b) = 1, U'(-b) = 0.
ZeroEnergyMode zero_energy_mode(const PotentialSpec& spec, const ode::Tolerance& tol) {
  using S = ode::State<double, 4>;
  const double b = spec.half_width();
  auto rhs = [&](double x, const S& s, S& d) {
    d[0] = s[1];
    d[1] = spec(x) * s[0];
    d[2] = s[0] * s[0];
    d[3] = s[0] * s[0] * s[0] * s[0];
  };
  constexpr int n = 201;
  std::vector<double> stops;
  for (int i = 1; i + 1 < n; ++i) stops.push_back(-b + 2.0 * b * i / (n - 1));
  for (double p : spec.interior_breakpoints()) stops.push_back(p);
  std::vector<std::pair<double, double>> samples;
  auto observe = [&](double x, const S& s) { samples.emplace_back(x, s[0]); };
  const S r = ode::integrate<double, 4>(rhs, S{1.0, 0.0, 0.0, 0.0}, -b, b, stops, tol, observe);
  ZeroEnergyMode m{r[0], r[2], r[3], 0.0, 0.0};
  // Samples on the uniform grid come in mirror pairs.
  std::vector<double> uniform;
  for (const auto& [x, u] : samples) {
    const double t = (x + b) / (2.0 * b) * (n - 1);
    if (std::abs(t - std::round(t)) < 1e-9) uniform.push_back(u);
  }
  for (std::size_t i = 0; i < uniform.size(); ++i) {
    const double a = uniform[i], c = uniform[uniform.size() - 1 - i];
    m.parity_defect_even = std::max(m.parity_defect_even, std::abs(a - c));
    m.parity_defect_odd = std::max(m.parity_defect_odd, std::abs(a + c));
  }
  return m;
}

}  // namespace

std::optional<SpectralPoint> detect_threshold(const PotentialSpec& spec, const SpectrumOptions& opts) {
  const double w0 = wronskian_on_axis(spec, 0.0, opts.tol);
  double scale = 0.0;
  for (int j = 0; j < 8; ++j) {
    const cplx k = std::polar(0.5, 2.0 * std::numbers::pi * j / 8.0);
    scale = std::max(scale, std::abs(evaluate_target(spec, Target::W, k, opts.tol).value));
  }
  if (!(std::abs(w0) < 1e-6 * scale)) return std::nullopt;
  SpectralPoint p;
  p.k_star = 0.0;
  p.target = Target::W;
  p.cls = SpectralClass::ThresholdResonance;
  p.residual = std::abs(w0);
  p.scale = scale;
  const ZeroEnergyMode m = zero_energy_mode(spec, opts.tol);
  p.mode = ModeTrace{1.0, m.u_right, m.int_u2, m.int_u4};
  if (spec.is_even()) {
    p.parity = std::abs(m.u_right - 1.0) < std::abs(m.u_right + 1.0) ? Parity::Even : Parity::Odd;
    const double defect = p.parity == Parity::Even ? m.parity_defect_even : m.parity_defect_odd;
    if (defect > 1e-8) p.parity = Parity::None;
  }
  return p;
}

SpectralPoint mode_and_nondegeneracy(const PotentialSpec& spec, SpectralPoint point, const ode::Tolerance& tol) {
  if (!on_axis(point.k_star) || point.k_star.imag() == 0.0)
    throw Error(ErrorKind::NotOnAxis, "mode needs a nonzero purely imaginary zero");
  const double kappa = point.k_star.imag();
  const BCSignature sig = signature_for(point.target, kappa);
  ShootOptions so;
  so.tol = tol;
  so.grid_points = 2;
  const InnerSolution s = shoot(spec, kappa, 0.0, sig, so);
  point.mode = ModeTrace{s.u_left(), s.u_right(), s.int_u2, s.int_u4};
  const double sg = kappa > 0.0 ? 1.0 : -1.0;
  const double cL = sig.sigma_L * sg, cR = sig.sigma_R * sg;
  point.nondegeneracy = 2.0 * kappa * s.int_u2 + cL * s.u_left() * s.u_left() - cR * s.u_right() * s.u_right();
  point.degenerate = std::abs(point.nondegeneracy) < 1e-8;
  return point;
}

double bisect_threshold_alpha(const PotentialSpec& family, double alpha_lo, double alpha_hi, double tol) {
  auto w0 = [&](double a) { return wronskian_on_axis(family.with_alpha(a), 0.0); };
  double flo = w0(alpha_lo), fhi = w0(alpha_hi);
  if ((flo > 0.0) == (fhi > 0.0)) throw Error(ErrorKind::NoThreshold, "w(0) keeps its sign on the alpha interval");
  while (alpha_hi - alpha_lo > tol * std::max(1.0, std::abs(alpha_lo))) {
    const double mid = 0.5 * (alpha_lo + alpha_hi);
    const double fm = w0(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      alpha_lo = mid;
      flo = fm;
    } else {
      alpha_hi = mid;
    }
  }
  return 0.5 * (alpha_lo + alpha_hi);
}

}  // namespace resbif
