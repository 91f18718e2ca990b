// Two-variable means on the positive reals and the metrics that make them
// contractive, plus representing functions for the operator calculus.
#pragma once

#include <functional>
#include <string>

#include "meanx/means_core.hpp"

namespace meanx::scalar {

// Validating wrapper used at input boundaries; the computational kernels work
// on plain doubles.
class PositiveReal {
 public:
  explicit PositiveReal(double v);
  operator double() const noexcept { return v_; }
  double value() const noexcept { return v_; }

 private:
  double v_;
};

MetricSpace<double> absolute_metric(double eq_tolerance = 1e-12);

// |log x - log y|, the one-dimensional Thompson metric.
MetricSpace<double> log_metric(double eq_tolerance = 1e-12);

// d(x, y) = |f(x) - f(y)| for strictly monotone f. Under its own pullback
// metric a quasi-arithmetic mean is an exact midpoint, factor 1/2.
MetricSpace<double> pullback_metric(std::function<double(double)> f, double eq_tolerance = 1e-12);

double arithmetic(double x, double y);
double geometric(double x, double y);  // requires x, y > 0
double harmonic(double x, double y);   // requires x, y > 0

// (b - a) / (log b - log a), continued across a == b; near-equal arguments
// use the series a(1 + u/2 + u^2/6 + u^3/24), u = log(b/a), |u| < 1e-6.
double logarithmic_closed_form(double a, double b);

MeanSpec<double> arithmetic_mean();  // pair with absolute_metric
MeanSpec<double> geometric_mean();   // pair with log_metric
MeanSpec<double> harmonic_mean();    // pair with pullback_metric(1/x)

// s*x + (1-s)*y, 0 < s < 1; contraction factor max(s, 1-s) in the absolute
// metric, symmetric only at s = 1/2.
MeanSpec<double> weighted_affine(double s);

// f^{-1}((f(x) + f(y))/2). The caller supplies the inverse; no numeric
// inversion is attempted. Pair with pullback_metric(f).
MeanSpec<double> quasi_arithmetic(std::function<double(double)> f,
                                  std::function<double(double)> f_inv);

struct RepresentingFunction {
  std::string name;
  std::function<double(double)> f;  // on (0, inf), f(1) = 1
};

RepresentingFunction rf_arithmetic();   // (1 + x)/2
RepresentingFunction rf_geometric();    // sqrt(x)
RepresentingFunction rf_harmonic();     // 2x/(1 + x)
RepresentingFunction rf_logarithmic();  // (x - 1)/log x
RepresentingFunction rf_identity();     // x, the right-trivial mean

// Largest violation of f(1)=1 and of monotonicity over the grid; a clean
// representing function returns a value within roundoff of zero.
double representing_function_violation(const RepresentingFunction& rf,
                                       std::span<const double> grid);

}  // namespace meanx::scalar
