#include "meanx/operator_means.hpp"

#include <cmath>
#include <utility>

#include "meanx/sampling.hpp"

namespace meanx::op {

namespace {

void check_pair(const la::Matrix& a, const la::Matrix& b, const char* who) {
  if (a.dim() != b.dim())
    throw DimensionError(std::string(who) + ": operand dimensions differ (" +
                         std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) + ")");
}

}  // namespace

la::Matrix arithmetic(const la::Matrix& a, const la::Matrix& b) {
  check_pair(a, b, "op::arithmetic");
  la::Matrix m = a + b;
  m *= 0.5;
  m.symmetrize();
  return m;
}

la::Matrix harmonic(const la::Matrix& a, const la::Matrix& b) {
  check_pair(a, b, "op::harmonic");
  la::Matrix m = matrix_inverse(matrix_inverse(a) + matrix_inverse(b));
  m *= 2.0;
  m.symmetrize();
  return m;
}

la::Matrix geometric(const la::Matrix& a, const la::Matrix& b) {
  return kubo_ando(scalar::rf_geometric(), a, b);
}

la::Matrix kubo_ando(const scalar::RepresentingFunction& rf, const la::Matrix& a,
                     const la::Matrix& b) {
  check_pair(a, b, "op::kubo_ando");
  auto ed = la::sym_eigen(a);
  la::Matrix root(a.dim());
  la::Matrix iroot(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = i; j < a.dim(); ++j) {
      double r = 0.0, ir = 0.0;
      for (int k = 0; k < a.dim(); ++k) {
        const double lam = ed.values[k];
        if (!(lam > 0.0))
          throw DomainError("op::kubo_ando: first operand has eigenvalue " + std::to_string(lam));
        const double s = std::sqrt(lam);
        r += ed.vectors(i, k) * s * ed.vectors(j, k);
        ir += ed.vectors(i, k) / s * ed.vectors(j, k);
      }
      root(i, j) = root(j, i) = r;
      iroot(i, j) = iroot(j, i) = ir;
    }
  la::Matrix inner = iroot * b * iroot;
  inner.symmetrize();
  la::Matrix m = root * la::matrix_function(inner, rf.f) * root;
  m.symmetrize();
  return m;
}

MetricSpace<la::Matrix> thompson_space(double eq_tolerance) {
  MetricSpace<la::Matrix> s;
  s.eq_tolerance = eq_tolerance;
  s.distance = [](const la::Matrix& a, const la::Matrix& b) {
    return la::thompson_distance(a, b);
  };
  return s;
}

namespace {

OperatorMean make_mean(std::string name, bool symmetric, std::optional<double> rho,
                       la::Matrix (*fn)(const la::Matrix&, const la::Matrix&)) {
  OperatorMean m;
  m.name = std::move(name);
  m.spec.arity = 2;
  m.spec.symmetric = symmetric;
  m.spec.declared_rho = rho;
  m.spec.evaluate = [fn](std::span<const la::Matrix> xs) { return fn(xs[0], xs[1]); };
  return m;
}

}  // namespace

OperatorMean arithmetic_mean() { return make_mean("arithmetic", true, std::nullopt, &arithmetic); }

OperatorMean harmonic_mean() { return make_mean("harmonic", true, std::nullopt, &harmonic); }

OperatorMean geometric_mean() { return make_mean("geometric", true, 0.5, &geometric); }

OperatorMean kubo_ando_mean(scalar::RepresentingFunction rf, bool symmetric) {
  OperatorMean m;
  m.name = "kubo_ando:" + rf.name;
  m.spec.arity = 2;
  m.spec.symmetric = symmetric;
  m.spec.evaluate = [rf = std::move(rf)](std::span<const la::Matrix> xs) {
    return kubo_ando(rf, xs[0], xs[1]);
  };
  return m;
}

ContractionEstimate<la::Matrix> certify_contraction(const MeanSpec<la::Matrix>& mean,
                                                    la::OrderInterval interval, int dim,
                                                    int samples, std::uint64_t seed) {
  if (interval.n < 1) throw DomainError("certify_contraction: interval bound must be >= 1");
  sample::Rng rng(seed);
  const double lo = 1.0 / interval.n;
  const double hi = interval.n;
  auto space = thompson_space();
  return estimate_contraction(space, mean, samples,
                              [&rng, dim, lo, hi]() { return sample::random_spd(rng, dim, lo, hi); });
}

OperatorMean with_certificate(OperatorMean mean, la::OrderInterval interval, int dim, int samples,
                              std::uint64_t seed) {
  auto est = certify_contraction(mean.spec, interval, dim, samples, seed);
  const double rho = est.rho * 1.05;
  mean.certificate = IntervalCertificate{interval, rho};
  mean.spec.declared_rho = rho;
  return mean;
}

}  // namespace meanx::op
