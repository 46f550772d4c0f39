#include "resbif/kernels.hpp"

#include <omp.h>

namespace resbif::kernels {

int resolve_jobs(int jobs) { return jobs > 0 ? jobs : omp_get_max_threads(); }

std::vector<ScatteringData> scatter_serial(const PotentialSpec& spec, std::span<const cplx> ks,
                                           const ScatteringOptions& opts) {
  std::vector<ScatteringData> out;
  out.reserve(ks.size());
  for (cplx k : ks) out.push_back(scattering_data(spec, k, opts));
  return out;
}

std::vector<ScatteringData> scatter_parallel(const PotentialSpec& spec, std::span<const cplx> ks,
                                             const ScatteringOptions& opts, int jobs) {
  std::vector<ScatteringData> out(ks.size());
  parallel_for(ks.size(), jobs, [&](std::size_t i) { out[i] = scattering_data(spec, ks[i], opts); });
  return out;
}

std::vector<TargetValue> target_serial(const PotentialSpec& spec, Target target, std::span<const cplx> ks,
                                       const ode::Tolerance& tol) {
  std::vector<TargetValue> out;
  out.reserve(ks.size());
  for (cplx k : ks) out.push_back(evaluate_target(spec, target, k, tol));
  return out;
}

std::vector<TargetValue> target_parallel(const PotentialSpec& spec, Target target, std::span<const cplx> ks,
                                         const ode::Tolerance& tol, int jobs) {
  std::vector<TargetValue> out(ks.size());
  parallel_for(ks.size(), jobs, [&](std::size_t i) { out[i] = evaluate_target(spec, target, ks[i], tol); });
  return out;
}

std::vector<AxisValue> axis_serial(const PotentialSpec& spec, Target target, std::span<const double> kappas,
                                   const ode::Tolerance& tol) {
  std::vector<AxisValue> out;
  out.reserve(kappas.size());
  for (double kappa : kappas) out.push_back(evaluate_target_axis(spec, target, kappa, tol));
  return out;
}

std::vector<AxisValue> axis_parallel(const PotentialSpec& spec, Target target, std::span<const double> kappas,
                                     const ode::Tolerance& tol, int jobs) {
  std::vector<AxisValue> out(kappas.size());
  parallel_for(kappas.size(), jobs,
               [&](std::size_t i) { out[i] = evaluate_target_axis(spec, target, kappas[i], tol); });
  return out;
}

}  // namespace resbif::kernels
