// Generic engine for extending 2-variable means to n variables.
//
// A k-mean mu on a metric space induces a self-map of (k+1)-tuples: entry i
// of the image is mu applied to the tuple with one coordinate deleted. For
// nonexpansive, coordinatewise contractive means the iterates of that map
// collapse to a constant tuple, and the common value defines a (k+1)-mean.
// Repeating the construction yields means of every higher arity.
//
// Everything here is templated over the element type; the scalar and SPD
// instantiations live in the sibling headers.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "meanx/errors.hpp"

namespace meanx {

template <class T>
struct MetricSpace {
  std::function<double(const T&, const T&)> distance;
  double eq_tolerance = 1e-12;  // below this, elements count as equal
};

// A mean of fixed arity. `evaluate` must be defined on every tuple of that
// arity in the space's domain and must be idempotent (constant tuples map to
// their common value). `declared_rho` is a coordinatewise contraction factor
// the caller vouches for; it is carried into extensions unchanged and is only
// consumed where a numeric bound is needed (decay assertions, fixed points).
template <class T>
struct MeanSpec {
  int arity = 2;
  std::function<T(std::span<const T>)> evaluate;
  bool symmetric = false;
  std::optional<double> declared_rho;

  T operator()(std::span<const T> xs) const {
    if (static_cast<int>(xs.size()) != arity)
      throw DimensionError("mean of arity " + std::to_string(arity) + " applied to " +
                           std::to_string(xs.size()) + " elements");
    return evaluate(xs);
  }
  T operator()(const std::vector<T>& xs) const { return (*this)(std::span<const T>(xs)); }
  T operator()(const T& x, const T& y) const {
    const std::array<T, 2> pair{x, y};
    return (*this)(std::span<const T>(pair.data(), 2));
  }
};

enum class BarycentricVariant : std::uint8_t {
  Beta,      // entry i deletes coordinate i
  BetaStar,  // entry i deletes coordinate k-i (0-based); the reversal of Beta
};

template <class T>
double tuple_diameter(const MetricSpace<T>& space, std::span<const T> xs) {
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j)
      d = std::max(d, space.distance(xs[i], xs[j]));
  return d;
}

namespace detail {

// Writes the barycentric image of xs into out, reusing sub as scratch.
template <class T>
void barycentric_step_into(const MeanSpec<T>& mean, const std::vector<T>& xs,
                           BarycentricVariant variant, std::vector<T>& sub, std::vector<T>& out) {
  const int k = mean.arity;
  if (static_cast<int>(xs.size()) != k + 1)
    throw DimensionError("barycentric step needs a tuple of " + std::to_string(k + 1) +
                         " elements, got " + std::to_string(xs.size()));
  out.clear();
  for (int i = 0; i <= k; ++i) {
    const int drop = variant == BarycentricVariant::Beta ? i : k - i;
    sub.clear();
    for (int j = 0; j <= k; ++j)
      if (j != drop) sub.push_back(xs[j]);
    out.push_back(mean.evaluate(sub));
  }
}

}  // namespace detail

template <class T>
std::vector<T> barycentric_step(const MeanSpec<T>& mean, std::span<const T> xs,
                                BarycentricVariant variant = BarycentricVariant::Beta) {
  std::vector<T> in(xs.begin(), xs.end());
  std::vector<T> sub, out;
  sub.reserve(mean.arity);
  out.reserve(mean.arity + 1);
  detail::barycentric_step_into(mean, in, variant, sub, out);
  return out;
}

template <class T>
std::vector<T> barycentric_step_star(const MeanSpec<T>& mean, std::span<const T> xs) {
  return barycentric_step(mean, xs, BarycentricVariant::BetaStar);
}

template <class T>
struct ConvergenceReport {
  int iterations = 0;
  std::vector<double> diameter_trace;  // entry n is the diameter after n steps
  T limit{};
  bool converged = false;
  // context for bound columns and diagnostics
  int mean_arity = 2;
  std::optional<double> rho;
  double tolerance = 0.0;
};

// Iterates the barycentric map until the tuple diameter drops to `tolerance`.
// A constant tuple converges in zero iterations. On exhaustion the report is
// returned with converged=false; the caller decides whether that is an error.
template <class T>
ConvergenceReport<T> power_converge(const MetricSpace<T>& space, const MeanSpec<T>& mean,
                                    std::span<const T> start, double tolerance, int max_iter,
                                    BarycentricVariant variant = BarycentricVariant::Beta) {
  if (!(tolerance > 0.0)) throw DomainError("power_converge: tolerance must be positive");
  if (max_iter < 1) throw DomainError("power_converge: max_iter must be at least 1");
  if (static_cast<int>(start.size()) != mean.arity + 1)
    throw DimensionError("power_converge: mean of arity " + std::to_string(mean.arity) +
                         " iterates on tuples of " + std::to_string(mean.arity + 1) +
                         " elements, got " + std::to_string(start.size()));

  ConvergenceReport<T> report;
  report.mean_arity = mean.arity;
  report.rho = mean.declared_rho;
  report.tolerance = tolerance;

  std::vector<T> cur(start.begin(), start.end());
  std::vector<T> next, sub;
  next.reserve(cur.size());
  sub.reserve(mean.arity);

  double d = tuple_diameter(space, std::span<const T>(cur));
  report.diameter_trace.push_back(d);
  while (d > tolerance && report.iterations < max_iter) {
    detail::barycentric_step_into(mean, cur, variant, sub, next);
    cur.swap(next);
    d = tuple_diameter(space, std::span<const T>(cur));
    report.diameter_trace.push_back(d);
    ++report.iterations;
  }
  report.converged = d <= tolerance;
  report.limit = cur.front();
  return report;
}

// The (k+1)-mean defined by the limit of the barycentric iteration. Symmetry
// and declared_rho carry over; the evaluation throws ConvergenceError if the
// iteration stalls.
template <class T>
MeanSpec<T> beta_extend(const MetricSpace<T>& space, const MeanSpec<T>& mean, double tolerance,
                        int max_iter, BarycentricVariant variant = BarycentricVariant::Beta) {
  if (!(tolerance > 0.0)) throw DomainError("beta_extend: tolerance must be positive");
  MeanSpec<T> out;
  out.arity = mean.arity + 1;
  out.symmetric = mean.symmetric;
  out.declared_rho = mean.declared_rho;
  auto inner = std::make_shared<const MeanSpec<T>>(mean);
  out.evaluate = [space, inner, tolerance, max_iter, variant](std::span<const T> xs) -> T {
    auto report = power_converge(space, *inner, xs, tolerance, max_iter, variant);
    if (!report.converged)
      throw ConvergenceError("arity-" + std::to_string(inner->arity + 1) +
                                 " extension stalled after " + std::to_string(report.iterations) +
                                 " iterations (diameter " +
                                 std::to_string(report.diameter_trace.back()) + ", tolerance " +
                                 std::to_string(tolerance) + ")",
                             report.iterations, report.diameter_trace.back());
    return report.limit;
  };
  return out;
}

// Builds the tower of extensions of a 2-mean up to target_arity and returns
// the levels of arity 3..target_arity (index 0 is the 3-mean). Each level
// evaluates the one below it at a tenth of its own tolerance, so the level
// at target_arity meets the requested tolerance; the levels hold each other
// by shared reference and are never re-derived.
template <class T>
std::vector<MeanSpec<T>> extend_tower(const MetricSpace<T>& space, const MeanSpec<T>& base,
                                      int target_arity, double tolerance, int max_iter,
                                      BarycentricVariant variant = BarycentricVariant::Beta) {
  if (base.arity != 2) throw DimensionError("extend_tower: base mean must have arity 2");
  if (target_arity < 3) throw DimensionError("extend_tower: target arity must be at least 3");
  if (!(tolerance > 0.0)) throw DomainError("extend_tower: tolerance must be positive");

  std::vector<MeanSpec<T>> levels;
  levels.reserve(target_arity - 2);
  MeanSpec<T> cur = base;
  for (int n = 3; n <= target_arity; ++n) {
    const double level_tol = tolerance * std::pow(10.0, -(target_arity - n));
    cur = beta_extend(space, cur, level_tol, max_iter, variant);
    levels.push_back(cur);
  }
  return levels;
}

// Distance between extension(x) and extension(beta(x)); zero for the genuine
// extension since the limit is invariant under the barycentric map.
template <class T>
double beta_invariance_residual(const MetricSpace<T>& space, const MeanSpec<T>& extension,
                                const MeanSpec<T>& base, std::span<const T> xs,
                                BarycentricVariant variant = BarycentricVariant::Beta) {
  if (extension.arity != base.arity + 1)
    throw DimensionError("beta_invariance_residual: extension arity must be base arity + 1");
  auto stepped = barycentric_step(base, xs, variant);
  return space.distance(extension(xs), extension(stepped));
}

// Unique solution x of mean(anchor..., x) = x, by fixed-point iteration.
// Requires a declared contraction factor below 1 in the last coordinate.
template <class T>
T stable_reduce(const MetricSpace<T>& space, const MeanSpec<T>& mean, std::span<const T> anchor,
                double tolerance, int max_iter) {
  if (!mean.declared_rho || !(*mean.declared_rho < 1.0))
    throw DomainError("stable_reduce: mean needs a declared contraction factor below 1");
  if (static_cast<int>(anchor.size()) != mean.arity - 1)
    throw DimensionError("stable_reduce: anchor must have " + std::to_string(mean.arity - 1) +
                         " elements, got " + std::to_string(anchor.size()));
  if (!(tolerance > 0.0)) throw DomainError("stable_reduce: tolerance must be positive");

  std::vector<T> args(anchor.begin(), anchor.end());
  args.push_back(anchor.front());
  T x = anchor.front();
  double gap = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    args.back() = x;
    T next = mean.evaluate(args);
    gap = space.distance(next, x);
    x = std::move(next);
    if (gap <= tolerance) return x;
  }
  throw ConvergenceError("stable_reduce: fixed point not reached after " +
                             std::to_string(max_iter) + " iterations (gap " + std::to_string(gap) +
                             ")",
                         max_iter, gap);
}

// Distance between extension(anchor, base(anchor)) and base(anchor). Zero
// when the extension is stable over the base mean.
template <class T>
double stable_extension_residual(const MetricSpace<T>& space, const MeanSpec<T>& extension,
                                 const MeanSpec<T>& base, std::span<const T> anchor) {
  if (extension.arity != base.arity + 1)
    throw DimensionError("stable_extension_residual: extension arity must be base arity + 1");
  T m = base(anchor);
  std::vector<T> args(anchor.begin(), anchor.end());
  args.push_back(m);
  return space.distance(extension(args), m);
}

// Product space under the sup metric; the product of means acts coordinatewise.
template <class X, class Y>
MetricSpace<std::pair<X, Y>> product_space(const MetricSpace<X>& a, const MetricSpace<Y>& b) {
  MetricSpace<std::pair<X, Y>> out;
  out.eq_tolerance = std::min(a.eq_tolerance, b.eq_tolerance);
  out.distance = [da = a.distance, db = b.distance](const std::pair<X, Y>& p,
                                                    const std::pair<X, Y>& q) {
    return std::max(da(p.first, q.first), db(p.second, q.second));
  };
  return out;
}

template <class X, class Y>
MeanSpec<std::pair<X, Y>> product_mean(const MeanSpec<X>& mu, const MeanSpec<Y>& nu) {
  if (mu.arity != nu.arity) throw DimensionError("product_mean: factor arities differ");
  MeanSpec<std::pair<X, Y>> out;
  out.arity = mu.arity;
  out.symmetric = mu.symmetric && nu.symmetric;
  if (mu.declared_rho && nu.declared_rho)
    out.declared_rho = std::max(*mu.declared_rho, *nu.declared_rho);
  out.evaluate = [mu, nu](std::span<const std::pair<X, Y>> xs) {
    std::vector<X> a;
    std::vector<Y> b;
    a.reserve(xs.size());
    b.reserve(xs.size());
    for (const auto& p : xs) {
      a.push_back(p.first);
      b.push_back(p.second);
    }
    return std::pair<X, Y>(mu.evaluate(a), nu.evaluate(b));
  };
  return out;
}

// Distance between g(mu(xs)) and nu(g(x_1), ..., g(x_n)); zero when g carries
// mu to nu, a relation inherited by the whole tower of extensions.
template <class X, class Y>
double homomorphism_residual(const MetricSpace<Y>& target, const std::function<Y(const X&)>& g,
                             const MeanSpec<X>& mu, const MeanSpec<Y>& nu, std::span<const X> xs) {
  if (mu.arity != nu.arity) throw DimensionError("homomorphism_residual: arities differ");
  std::vector<Y> gx;
  gx.reserve(xs.size());
  for (const auto& x : xs) gx.push_back(g(x));
  return target.distance(g(mu(xs)), nu(gx));
}

// Empirical coordinatewise contraction factor in the second argument:
// sup d(m(a,x), m(a,y)) / d(x,y) over sampled triples.
template <class T>
struct ContractionEstimate {
  double rho = 0.0;
  T witness_anchor{};
  T witness_x{};
  T witness_y{};
  double witness_num = 0.0;
  double witness_den = 0.0;
};

template <class T, class Sampler>
ContractionEstimate<T> estimate_contraction(const MetricSpace<T>& space, const MeanSpec<T>& mean,
                                            int samples, Sampler&& draw) {
  if (mean.arity != 2) throw DimensionError("estimate_contraction: mean must have arity 2");
  if (samples < 1) throw DomainError("estimate_contraction: samples must be at least 1");
  ContractionEstimate<T> est;
  for (int s = 0; s < samples; ++s) {
    T a = draw();
    T x = draw();
    T y = draw();
    const double den = space.distance(x, y);
    if (den <= space.eq_tolerance) continue;
    const double num = space.distance(mean(a, x), mean(a, y));
    if (num / den > est.rho) {
      est.rho = num / den;
      est.witness_anchor = a;
      est.witness_x = x;
      est.witness_y = y;
      est.witness_num = num;
      est.witness_den = den;
    }
  }
  return est;
}

}  // namespace meanx
