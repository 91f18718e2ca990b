// Seeded random draws used by audits, certification and tests.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "meanx/linalg.hpp"

namespace meanx::sample {

using Rng = std::mt19937_64;

double log_uniform(Rng& rng, double lo, double hi);

// QR of a standard Gaussian matrix (modified Gram-Schmidt, two passes).
la::Matrix random_orthogonal(Rng& rng, int dim);

// Q^T diag(d) Q with d log-uniform in [eig_lo, eig_hi].
la::Matrix random_spd(Rng& rng, int dim, double eig_lo, double eig_hi);

// Positive semidefinite perturbation with eigenvalues uniform in [0, eig_hi].
la::Matrix random_psd(Rng& rng, int dim, double eig_hi);

std::vector<la::Matrix> random_spd_tuple(Rng& rng, int count, int dim, double eig_lo,
                                         double eig_hi);

std::vector<double> random_positive_tuple(Rng& rng, int count, double lo, double hi);

}  // namespace meanx::sample
