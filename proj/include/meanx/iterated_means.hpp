// Composition of a midpoint mean with a nonexpansive partner by the
// two-track iteration whose gap halves each round.
//
//   iterated: l' = lambda(l, n),  n' = nu(l, n)       (both from the old pair)
//   skewed:   n' = nu(l, n),      l' = lambda(l, n')  (nu updates first)
//
// Composing the geometric with the arithmetic operator mean gives the
// arithmetic-geometric mean in the iterated order and the logarithmic mean
// in the skewed order; swapping the update order silently swaps the two, so
// a regression test pins them apart.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "meanx/means_core.hpp"
#include "meanx/operator_means.hpp"

namespace meanx {

enum class CompositionKind : std::uint8_t { Iterated, Skewed };

template <class T>
struct CompositionRun {
  T value{};          // the lambda track at the final round
  int iterations = 0;
  std::vector<double> gap_trace;  // d(lambda_n, nu_n) per round, starting at round 1
  bool converged = false;
};

template <class T>
CompositionRun<T> compose_run(const MetricSpace<T>& space, const MeanSpec<T>& lambda,
                              const MeanSpec<T>& nu, CompositionKind kind, const T& x, const T& y,
                              double tolerance, int max_iter) {
  if (!(tolerance > 0.0)) throw DomainError("compose: tolerance must be positive");
  if (max_iter < 1) throw DomainError("compose: max_iter must be at least 1");
  if (lambda.arity != 2 || nu.arity != 2)
    throw DimensionError("compose: both factors must have arity 2");

  CompositionRun<T> run;
  T l = lambda(x, y);
  T n = nu(x, y);
  double gap = space.distance(l, n);
  run.gap_trace.push_back(gap);
  while (gap > tolerance && run.iterations < max_iter) {
    if (kind == CompositionKind::Iterated) {
      T l2 = lambda(l, n);
      T n2 = nu(l, n);
      l = std::move(l2);
      n = std::move(n2);
    } else {
      T n2 = nu(l, n);
      l = lambda(l, n2);
      n = std::move(n2);
    }
    gap = space.distance(l, n);
    run.gap_trace.push_back(gap);
    ++run.iterations;
  }
  run.converged = gap <= tolerance;
  run.value = std::move(l);
  return run;
}

// The 2-mean defined by the common limit of the two tracks. `lambda` must be
// a midpoint mean (declared factor at most 1/2); the composite inherits
// max(1/2, nu's factor) when nu declares one.
template <class T>
MeanSpec<T> compose(const MetricSpace<T>& space, const MeanSpec<T>& lambda, const MeanSpec<T>& nu,
                    CompositionKind kind, double tolerance, int max_iter) {
  if (!lambda.declared_rho || !(*lambda.declared_rho <= 0.5))
    throw DomainError("compose: lambda must declare a midpoint factor (rho <= 1/2)");
  MeanSpec<T> out;
  out.arity = 2;
  out.symmetric = lambda.symmetric && nu.symmetric;
  if (nu.declared_rho && *nu.declared_rho < 1.0)
    out.declared_rho = std::max(0.5, *nu.declared_rho);
  out.evaluate = [space, lambda, nu, kind, tolerance, max_iter](std::span<const T> xs) -> T {
    auto run = compose_run(space, lambda, nu, kind, xs[0], xs[1], tolerance, max_iter);
    if (!run.converged)
      throw ConvergenceError("composition stalled after " + std::to_string(run.iterations) +
                                 " rounds (gap " + std::to_string(run.gap_trace.back()) + ")",
                             run.iterations, run.gap_trace.back());
    return run.value;
  };
  return out;
}

namespace op {

OperatorMean agm_mean(double tolerance = 1e-10, int max_iter = 10000);
OperatorMean logarithmic_mean(double tolerance = 1e-10, int max_iter = 10000);
OperatorMean hgm_mean(double tolerance = 1e-10, int max_iter = 10000);

la::Matrix agm(const la::Matrix& a, const la::Matrix& b, double tolerance = 1e-10,
               int max_iter = 10000);
la::Matrix logarithmic(const la::Matrix& a, const la::Matrix& b, double tolerance = 1e-10,
                       int max_iter = 10000);
la::Matrix hgm(const la::Matrix& a, const la::Matrix& b, double tolerance = 1e-10,
               int max_iter = 10000);

}  // namespace op

namespace scalar {

MeanSpec<double> agm_mean(double tolerance = 1e-12, int max_iter = 10000);
MeanSpec<double> logarithmic_mean(double tolerance = 1e-12, int max_iter = 10000);
MeanSpec<double> hgm_mean(double tolerance = 1e-12, int max_iter = 10000);

}  // namespace scalar

}  // namespace meanx
