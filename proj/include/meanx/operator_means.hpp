// Two-variable means on the SPD cone under the Thompson metric.
//
// The geometric mean is a metric midpoint there, factor 1/2 everywhere.
// The arithmetic and harmonic means are nonexpansive everywhere but only
// contract coordinatewise on order intervals [(1/n) I, n I]; no closed form
// for that factor is known, so certificates carry a seeded empirical
// estimate instead.
#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "meanx/linalg.hpp"
#include "meanx/means_core.hpp"
#include "meanx/scalar_means.hpp"

namespace meanx::op {

la::Matrix arithmetic(const la::Matrix& a, const la::Matrix& b);
la::Matrix harmonic(const la::Matrix& a, const la::Matrix& b);

// a^{1/2} (a^{-1/2} b a^{-1/2})^{1/2} a^{1/2}
la::Matrix geometric(const la::Matrix& a, const la::Matrix& b);

// a^{1/2} f(a^{-1/2} b a^{-1/2}) a^{1/2}
la::Matrix kubo_ando(const scalar::RepresentingFunction& rf, const la::Matrix& a,
                     const la::Matrix& b);

MetricSpace<la::Matrix> thompson_space(double eq_tolerance = 1e-10);

struct IntervalCertificate {
  la::OrderInterval interval;
  double rho;
};

struct OperatorMean {
  std::string name;
  MeanSpec<la::Matrix> spec;
  std::optional<IntervalCertificate> certificate;
};

OperatorMean arithmetic_mean();
OperatorMean harmonic_mean();
OperatorMean geometric_mean();  // declared_rho = 1/2
OperatorMean kubo_ando_mean(scalar::RepresentingFunction rf, bool symmetric);

// Empirical sup of d(m(a,x), m(a,y))/d(x,y) over `samples` seeded triples
// drawn from [(1/n) I, n I] at the given dimension.
ContractionEstimate<la::Matrix> certify_contraction(const MeanSpec<la::Matrix>& mean,
                                                    la::OrderInterval interval, int dim,
                                                    int samples, std::uint64_t seed);

// Attaches certify_contraction's estimate, inflated by 5%, as the mean's
// interval certificate and declared factor.
OperatorMean with_certificate(OperatorMean mean, la::OrderInterval interval, int dim, int samples,
                              std::uint64_t seed);

}  // namespace meanx::op
