#include "meanx/iterated_means.hpp"

namespace meanx {

namespace op {

namespace {

OperatorMean composed(std::string name, const OperatorMean& lambda, const OperatorMean& nu,
                      CompositionKind kind, double tolerance, int max_iter) {
  OperatorMean m;
  m.name = std::move(name);
  m.spec = compose(thompson_space(), lambda.spec, nu.spec, kind, tolerance, max_iter);
  return m;
}

}  // namespace

OperatorMean agm_mean(double tolerance, int max_iter) {
  return composed("agm", geometric_mean(), arithmetic_mean(), CompositionKind::Iterated, tolerance,
                  max_iter);
}

OperatorMean logarithmic_mean(double tolerance, int max_iter) {
  return composed("logarithmic", geometric_mean(), arithmetic_mean(), CompositionKind::Skewed,
                  tolerance, max_iter);
}

OperatorMean hgm_mean(double tolerance, int max_iter) {
  return composed("hgm", geometric_mean(), harmonic_mean(), CompositionKind::Iterated, tolerance,
                  max_iter);
}

la::Matrix agm(const la::Matrix& a, const la::Matrix& b, double tolerance, int max_iter) {
  return agm_mean(tolerance, max_iter).spec(a, b);
}

la::Matrix logarithmic(const la::Matrix& a, const la::Matrix& b, double tolerance, int max_iter) {
  return logarithmic_mean(tolerance, max_iter).spec(a, b);
}

la::Matrix hgm(const la::Matrix& a, const la::Matrix& b, double tolerance, int max_iter) {
  return hgm_mean(tolerance, max_iter).spec(a, b);
}

}  // namespace op

namespace scalar {

namespace {

// The declared factors of the scalar arithmetic and harmonic means belong to
// their own metrics; under the log metric they only contract on intervals,
// so the composition starts without a declared factor.
MeanSpec<double> without_rho(MeanSpec<double> m) {
  m.declared_rho.reset();
  return m;
}

}  // namespace

MeanSpec<double> agm_mean(double tolerance, int max_iter) {
  return compose(log_metric(), geometric_mean(), without_rho(arithmetic_mean()),
                 CompositionKind::Iterated, tolerance, max_iter);
}

MeanSpec<double> logarithmic_mean(double tolerance, int max_iter) {
  return compose(log_metric(), geometric_mean(), without_rho(arithmetic_mean()),
                 CompositionKind::Skewed, tolerance, max_iter);
}

MeanSpec<double> hgm_mean(double tolerance, int max_iter) {
  return compose(log_metric(), geometric_mean(), without_rho(harmonic_mean()),
                 CompositionKind::Iterated, tolerance, max_iter);
}

}  // namespace scalar

}  // namespace meanx
