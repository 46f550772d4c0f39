#include "resbif/branch.hpp"

#include <algorithm>
#include <cmath>

#include "resbif/error.hpp"

namespace resbif {

const char* to_string(Termination t) {
  switch (t) {
    case Termination::ReachedEpsMax: return "ReachedEpsMax";
    case Termination::ReachedEMin: return "ReachedEMin";
    case Termination::NewtonFailed: return "NewtonFailed";
    case Termination::BCOutOfRange: return "BCOutOfRange";
    case Termination::Degenerate: return "Degenerate";
    case Termination::ReachedMaxPoints: return "ReachedMaxPoints";
    case Termination::ReachedEpsMin: return "ReachedEpsMin";
  }
  return "unknown";
}

GluedState seed_branch(const PotentialSpec& spec, const SpectralPoint& point, double eps0, const ShootOptions& opts) {
  if (point.cls == SpectralClass::ThresholdResonance)
    throw Error(ErrorKind::Degenerate, "threshold points seed only symmetric threshold branches");
  if (!on_axis(point.k_star) || point.k_star.imag() == 0.0)
    throw Error(ErrorKind::NotOnAxis, "branches are seeded only from nonzero imaginary-axis zeros");
  if (!point.simple) throw Error(ErrorKind::Degenerate, "seed is not a simple zero");
  SpectralPoint p = point;
  if (!p.mode) p = mode_and_nondegeneracy(spec, p, opts.tol);
  if (!(std::abs(p.nondegeneracy) >= 1e-6))
    throw Error(ErrorKind::Degenerate, "seed fails the non-degeneracy condition", p.nondegeneracy);
  const double kappa = p.k_star.imag();
  const BCSignature sig = signature_for(p.target, kappa);
  const InnerSolution sol = solve_kappa(spec, eps0, sig, kappa, opts);
  return assemble(sol, spec.half_width());
}

namespace {

struct Node {
  double kappa, t;
};

struct Corrected {
  InnerSolution sol;
  int iterations = 0;
};

double f_tol(const InnerSolution& s) { return 1e-10 * (1.0 + std::abs(s.u_right()) * std::abs(s.kappa)); }

// Newton on {F(kappa, e^t) = 0, tau . (z - z_pred) = 0}.
Corrected correct(const PotentialSpec& spec, BCSignature sig, Node pred, Node tau, const ShootOptions& opts) {
  Node z = pred;
  for (int it = 0; it < 10; ++it) {
    InnerSolution s = shoot(spec, z.kappa, std::exp(z.t), sig, opts);
    const double F = s.residual_F;
    const double Fk = s.dF_dkappa;
    const double Ft = s.eps * s.dF_deps;
    const double g = tau.kappa * (z.kappa - pred.kappa) + tau.t * (z.t - pred.t);
    const double det = Fk * tau.t - Ft * tau.kappa;
    if (!std::isfinite(det) || det == 0.0) throw Error(ErrorKind::Degenerate, "singular bordered system", z.kappa);
    const double dk = (-F * tau.t + Ft * g) / det;
    const double dt = (-Fk * g + tau.kappa * F) / det;
    if (std::abs(F) < f_tol(s) && std::abs(dk) < 1e-11 * (1.0 + std::abs(z.kappa)) && std::abs(dt) < 1e-11)
      return {std::move(s), it};
    z.kappa += dk;
    z.t += dt;
    if ((z.kappa > 0.0) != (pred.kappa > 0.0)) throw Error(ErrorKind::BCOutOfRange, "kappa changed sign", z.kappa);
  }
  throw Error(ErrorKind::NewtonDiverged, "corrector did not converge", z.kappa);
}

Node normalized(Node v) {
  const double n = std::hypot(v.kappa, v.t);
  return {v.kappa / n, v.t / n};
}

}  // namespace

BranchCurve continue_branch(const PotentialSpec& spec, const GluedState& start, const BranchControls& c,
                            int direction) {
  BranchCurve curve;
  curve.points.push_back(start);
  const BCSignature sig = start.inner.signature;
  Node z{start.inner.kappa, std::log(start.eps)};
  // Implicit-function tangent at the start.
  const double Ft0 = start.eps * start.inner.dF_deps;
  const double Fk0 = start.inner.dF_dkappa;
  if (!(std::abs(Fk0) > 0.0) && !(std::abs(Ft0) > 0.0)) {
    curve.termination = Termination::Degenerate;
    curve.message = "zero gradient at the start";
    return curve;
  }
  Node tau = normalized({-Ft0, Fk0});
  if (tau.t * direction < 0.0) tau = {-tau.kappa, -tau.t};

  double ds = c.ds0;
  int easy = 0;
  ErrorKind last_failure = ErrorKind::NewtonDiverged;
  std::string last_message;
  while (true) {
    if (static_cast<int>(curve.points.size()) >= c.max_points) {
      curve.termination = Termination::ReachedMaxPoints;
      break;
    }
    if (ds < c.ds_min) {
      curve.termination = last_failure == ErrorKind::BCOutOfRange ? Termination::BCOutOfRange
                          : last_failure == ErrorKind::Degenerate ? Termination::Degenerate
                                                                  : Termination::NewtonFailed;
      curve.message = last_message;
      // A soliton peak reaching +-b drives a boundary square root to zero;
      // the fixed signature cannot follow the branch past that point.
      const InnerSolution& last = curve.points.back().inner;
      const double k2 = last.kappa * last.kappa;
      const double ub = last.u_right();
      const double r = std::min(k2 - 0.5 * last.eps, k2 - 0.5 * last.eps * ub * ub);
      if (r < 1e-2 * k2) {
        curve.termination = Termination::BCOutOfRange;
        curve.message = "a soliton peak reached the support boundary";
      }
      break;
    }
    const Node pred{z.kappa + ds * tau.kappa, z.t + ds * tau.t};
    try {
      Corrected cr = correct(spec, sig, pred, tau, c.shoot);
      const Node next{cr.sol.kappa, std::log(cr.sol.eps)};
      const Node secant = normalized({next.kappa - z.kappa, next.t - z.t});
      if (secant.kappa * tau.kappa + secant.t * tau.t < 0.8) throw Error(ErrorKind::NewtonDiverged, "tangent turned too sharply");
      if (-cr.sol.kappa * cr.sol.kappa < c.E_min) {
        curve.termination = Termination::ReachedEMin;
        break;
      }
      if (cr.sol.eps > c.eps_max) {
        curve.termination = Termination::ReachedEpsMax;
        break;
      }
      if (cr.sol.eps < c.eps_min) {
        curve.termination = Termination::ReachedEpsMin;
        break;
      }
      GluedState g = assemble(cr.sol, spec.half_width());
      curve.points.push_back(std::move(g));
      curve.stats.accepted++;
      curve.stats.newton_iterations += cr.iterations;
      tau = secant;
      z = next;
      if (cr.iterations <= 3) {
        if (++easy >= 3) {
          ds = std::min(2.0 * ds, c.ds_max);
          easy = 0;
        }
      } else {
        easy = 0;
      }
    } catch (const Error& e) {
      curve.stats.rejected++;
      last_failure = e.kind();
      last_message = e.what();
      ds *= 0.5;
      easy = 0;
    }
  }
  return curve;
}

BranchCurve trace_branch(const PotentialSpec& spec, const SpectralPoint& point, const BranchControls& controls) {
  SpectralPoint p = point;
  if (!p.mode && on_axis(p.k_star) && p.k_star.imag() != 0.0) p = mode_and_nondegeneracy(spec, p, controls.shoot.tol);
  GluedState start;
  try {
    start = seed_branch(spec, p, controls.eps0, controls.shoot);
  } catch (const Error& e) {
    BranchCurve curve;
    curve.seed = p;
    curve.termination = e.kind() == ErrorKind::BCOutOfRange ? Termination::BCOutOfRange
                        : e.kind() == ErrorKind::NewtonDiverged ? Termination::NewtonFailed
                                                                : Termination::Degenerate;
    curve.message = e.what();
    return curve;
  }
  BranchCurve curve = continue_branch(spec, start, controls, +1);
  curve.seed = p;
  return curve;
}

BranchCurve threshold_branch(const PotentialSpec& spec, Parity parity, const BranchControls& c, int eps_per_decade) {
  if (!spec.is_even()) throw Error(ErrorKind::NotSymmetric, "threshold branches need an even potential");
  const auto point = detect_threshold(spec, SpectrumOptions{c.shoot.tol});
  if (!point) throw Error(ErrorKind::NoThreshold, "no threshold resonance");
  if (point->parity != parity) throw Error(ErrorKind::NoThreshold, "threshold mode has the other parity");
  BranchCurve curve;
  curve.seed = *point;
  // Linear threshold mode in the shooting normalisation gives E ~ -U(b)^2 eps / 2.
  const InnerSolution mode = shoot_threshold(spec, 0.0, 0.0, parity, c.shoot);
  double E = -0.5 * mode.u_right() * mode.u_right() * c.eps0;
  double eps = c.eps0;
  const double factor = std::pow(10.0, 1.0 / eps_per_decade);
  while (true) {
    if (static_cast<int>(curve.points.size()) >= c.max_points) {
      curve.termination = Termination::ReachedMaxPoints;
      break;
    }
    if (eps > c.eps_max * (1.0 + 1e-12)) {
      curve.termination = Termination::ReachedEpsMax;
      break;
    }
    try {
      const InnerSolution s = solve_threshold_symmetric(spec, eps, parity, E, c.shoot);
      if (s.E < c.E_min) {
        curve.termination = Termination::ReachedEMin;
        break;
      }
      curve.points.push_back(assemble(s, spec.half_width()));
      curve.stats.accepted++;
      const double ratio = s.E / eps;
      E = s.E;
      eps *= factor;
      E = ratio * eps;
    } catch (const Error& e) {
      curve.termination = e.kind() == ErrorKind::Degenerate ? Termination::Degenerate : Termination::NewtonFailed;
      curve.message = e.what();
      break;
    }
  }
  return curve;
}

namespace {

// Moves a converged inner solution from one alpha to another at fixed eps.
std::optional<InnerSolution> continue_in_alpha(const std::function<PotentialSpec(double)>& family, double from,
                                               double to, const InnerSolution& start, const ShootOptions& opts) {
  InnerSolution cur = start;
  double alpha = from;
  double step = (to - from) / 16.0;
  while ((to - alpha) * (to - from) > 0.0) {
    if (std::abs(step) < 1e-6 * std::abs(to - from)) return std::nullopt;
    const double next = (to - alpha - step) * (to - from) < 0.0 ? to : alpha + step;
    try {
      cur = solve_kappa(family(next), cur.eps, cur.signature, cur.kappa, opts);
      alpha = next;
    } catch (const Error&) {
      step *= 0.5;
    }
  }
  return cur;
}

}  // namespace

CoalescenceReport coalescence_scan(const std::function<PotentialSpec(double)>& family,
                                   const std::vector<double>& alphas, const CoalescenceOptions& opts) {
  CoalescenceReport rep;
  for (double alpha : alphas) {
    const PotentialSpec spec = family(alpha);
    CoalescenceSample s;
    s.alpha = alpha;
    for (const auto& p : scan_axis(spec, opts.target, opts.kappa_min, opts.kappa_max, opts.axis_grid, opts.spectrum))
      s.axis_kappas.push_back(p.kappa());
    s.box_count = count_zeros_box(spec, opts.target, opts.box, opts.spectrum);
    const auto zeros = locate_complex_zeros(spec, opts.target, opts.box, 12, opts.spectrum);
    for (const auto& z : zeros)
      if (!on_axis(z.k_star)) s.off_axis.push_back(z);
    rep.samples.push_back(std::move(s));
  }
  for (std::size_t i = 1; i < rep.samples.size(); ++i) {
    const auto& a = rep.samples[i - 1];
    const auto& b = rep.samples[i];
    if (a.box_count != b.box_count) rep.box_count_conserved = false;
    if (!rep.bracket && a.axis_kappas.size() >= b.axis_kappas.size() + 2 && b.off_axis.size() >= a.off_axis.size() + 2)
      rep.bracket = std::make_pair(a.alpha, b.alpha);
  }
  if (!opts.with_branches || !rep.bracket) return rep;

  // Branches just before the merge, one per axis zero.
  const double alpha_lo = rep.bracket->first, alpha_hi = rep.bracket->second;
  const PotentialSpec lo_spec = family(alpha_lo);
  for (const auto& p : scan_axis(lo_spec, opts.target, opts.kappa_min, opts.kappa_max, opts.axis_grid, opts.spectrum))
    rep.before.push_back(trace_branch(lo_spec, p, opts.controls));

  // After the merge no axis zero is left to seed from: carry branch points
  // across in alpha at fixed eps and continue both ways from there.
  const PotentialSpec hi_spec = family(alpha_hi);
  for (const auto& br : rep.before) {
    std::vector<const GluedState*> order;
    for (const auto& g : br.points) order.push_back(&g);
    std::sort(order.begin(), order.end(), [](auto* x, auto* y) { return x->eps > y->eps; });
    for (const GluedState* g : order) {
      const auto moved = continue_in_alpha(family, alpha_lo, alpha_hi, g->inner, opts.controls.shoot);
      if (!moved) continue;
      GluedState start;
      try {
        start = assemble(*moved, hi_spec.half_width());
      } catch (const Error&) {
        continue;
      }
      BranchCurve down = continue_branch(hi_spec, start, opts.controls, -1);
      BranchCurve up = continue_branch(hi_spec, start, opts.controls, +1);
      BranchCurve joined;
      joined.seed = br.seed;
      for (auto it = down.points.rbegin(); it != down.points.rend(); ++it) joined.points.push_back(*it);
      for (std::size_t k = 1; k < up.points.size(); ++k) joined.points.push_back(up.points[k]);
      joined.termination = up.termination;
      joined.message = "down: " + std::string(to_string(down.termination)) + ", up: " + to_string(up.termination);
      joined.stats.accepted = down.stats.accepted + up.stats.accepted;
      joined.stats.rejected = down.stats.rejected + up.stats.rejected;
      joined.stats.newton_iterations = down.stats.newton_iterations + up.stats.newton_iterations;
      rep.after_min_eps = joined.points.front().eps;
      for (const auto& q : joined.points) rep.after_min_eps = std::min(rep.after_min_eps, q.eps);
      rep.after = std::move(joined);
      return rep;
    }
  }
  return rep;
}

}  // namespace resbif
