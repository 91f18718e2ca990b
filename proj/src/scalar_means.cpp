#include "meanx/scalar_means.hpp"

#include <cmath>

namespace meanx::scalar {

namespace {

void require_positive(double v, const char* who) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw DomainError(std::string(who) + ": argument " + std::to_string(v) +
                      " is not a positive real");
}

}  // namespace

PositiveReal::PositiveReal(double v) : v_(v) {
  require_positive(v, "PositiveReal");
}

MetricSpace<double> absolute_metric(double eq_tolerance) {
  MetricSpace<double> m;
  m.eq_tolerance = eq_tolerance;
  m.distance = [](double x, double y) { return std::abs(x - y); };
  return m;
}

MetricSpace<double> log_metric(double eq_tolerance) {
  MetricSpace<double> m;
  m.eq_tolerance = eq_tolerance;
  m.distance = [](double x, double y) {
    require_positive(x, "log_metric");
    require_positive(y, "log_metric");
    return std::abs(std::log(x) - std::log(y));
  };
  return m;
}

MetricSpace<double> pullback_metric(std::function<double(double)> f, double eq_tolerance) {
  MetricSpace<double> m;
  m.eq_tolerance = eq_tolerance;
  m.distance = [f = std::move(f)](double x, double y) { return std::abs(f(x) - f(y)); };
  return m;
}

double arithmetic(double x, double y) { return 0.5 * (x + y); }

double geometric(double x, double y) {
  require_positive(x, "geometric");
  require_positive(y, "geometric");
  return std::sqrt(x) * std::sqrt(y);
}

double harmonic(double x, double y) {
  require_positive(x, "harmonic");
  require_positive(y, "harmonic");
  return 2.0 / (1.0 / x + 1.0 / y);
}

double logarithmic_closed_form(double a, double b) {
  require_positive(a, "logarithmic");
  require_positive(b, "logarithmic");
  const double u = std::log(b / a);
  if (std::abs(u) < 1e-6) return a * (1.0 + u * (0.5 + u * (1.0 / 6.0 + u / 24.0)));
  return (b - a) / u;
}

MeanSpec<double> arithmetic_mean() {
  MeanSpec<double> m;
  m.symmetric = true;
  m.declared_rho = 0.5;
  m.evaluate = [](std::span<const double> xs) { return arithmetic(xs[0], xs[1]); };
  return m;
}

MeanSpec<double> geometric_mean() {
  MeanSpec<double> m;
  m.symmetric = true;
  m.declared_rho = 0.5;
  m.evaluate = [](std::span<const double> xs) { return geometric(xs[0], xs[1]); };
  return m;
}

MeanSpec<double> harmonic_mean() {
  MeanSpec<double> m;
  m.symmetric = true;
  m.declared_rho = 0.5;
  m.evaluate = [](std::span<const double> xs) { return harmonic(xs[0], xs[1]); };
  return m;
}

MeanSpec<double> weighted_affine(double s) {
  if (!(s > 0.0) || !(s < 1.0))
    throw DomainError("weighted_affine: weight " + std::to_string(s) + " outside (0, 1)");
  MeanSpec<double> m;
  m.symmetric = s == 0.5;
  m.declared_rho = std::max(s, 1.0 - s);
  m.evaluate = [s](std::span<const double> xs) { return s * xs[0] + (1.0 - s) * xs[1]; };
  return m;
}

MeanSpec<double> quasi_arithmetic(std::function<double(double)> f,
                                  std::function<double(double)> f_inv) {
  MeanSpec<double> m;
  m.symmetric = true;
  m.declared_rho = 0.5;
  m.evaluate = [f = std::move(f), f_inv = std::move(f_inv)](std::span<const double> xs) {
    return f_inv(0.5 * (f(xs[0]) + f(xs[1])));
  };
  return m;
}

RepresentingFunction rf_arithmetic() {
  return {"arithmetic", [](double x) { return 0.5 * (1.0 + x); }};
}

RepresentingFunction rf_geometric() {
  return {"geometric", [](double x) { return std::sqrt(x); }};
}

RepresentingFunction rf_harmonic() {
  return {"harmonic", [](double x) { return 2.0 * x / (1.0 + x); }};
}

RepresentingFunction rf_logarithmic() {
  return {"logarithmic", [](double x) { return logarithmic_closed_form(1.0, x); }};
}

RepresentingFunction rf_identity() {
  return {"identity", [](double x) { return x; }};
}

double representing_function_violation(const RepresentingFunction& rf,
                                       std::span<const double> grid) {
  double worst = std::abs(rf.f(1.0) - 1.0);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double lo = std::min(grid[i], grid[i + 1]);
    const double hi = std::max(grid[i], grid[i + 1]);
    worst = std::max(worst, rf.f(lo) - rf.f(hi));
  }
  return worst;
}

}  // namespace meanx::scalar
