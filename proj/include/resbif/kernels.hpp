#pragma once

// Grid kernels over independent wavenumbers. Each has a serial reference and
// an OpenMP version; both return results in input order and must agree
// bit-for-bit, since every item is a pure function of (spec, k).

#include <exception>
#include <span>
#include <vector>

#include "resbif/scattering.hpp"

namespace resbif::kernels {

// jobs <= 0 means "all available threads".
int resolve_jobs(int jobs);

// Runs fn(i) for i in [0, n). The first exception thrown by any item is
// rethrown after the loop.
template <typename Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
  std::exception_ptr failure;
  const int threads = resolve_jobs(jobs);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(resbif_parallel_for)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

std::vector<ScatteringData> scatter_serial(const PotentialSpec& spec, std::span<const cplx> ks,
                                           const ScatteringOptions& opts = {});
std::vector<ScatteringData> scatter_parallel(const PotentialSpec& spec, std::span<const cplx> ks,
                                             const ScatteringOptions& opts = {}, int jobs = 0);

std::vector<TargetValue> target_serial(const PotentialSpec& spec, Target target, std::span<const cplx> ks,
                                       const ode::Tolerance& tol = {});
std::vector<TargetValue> target_parallel(const PotentialSpec& spec, Target target, std::span<const cplx> ks,
                                         const ode::Tolerance& tol = {}, int jobs = 0);

std::vector<AxisValue> axis_serial(const PotentialSpec& spec, Target target, std::span<const double> kappas,
                                   const ode::Tolerance& tol = {});
std::vector<AxisValue> axis_parallel(const PotentialSpec& spec, Target target, std::span<const double> kappas,
                                     const ode::Tolerance& tol = {}, int jobs = 0);

}  // namespace resbif::kernels
