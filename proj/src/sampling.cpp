#include "meanx/sampling.hpp"

#include <cmath>

namespace meanx::sample {

double log_uniform(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

la::Matrix random_orthogonal(Rng& rng, int dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  la::Matrix q(dim);
  for (int j = 0; j < dim; ++j) {
    double norm = 0.0;
    do {
      for (int i = 0; i < dim; ++i) q(i, j) = gauss(rng);
      // two Gram-Schmidt passes keep the columns orthogonal to roundoff
      for (int pass = 0; pass < 2; ++pass) {
        for (int k = 0; k < j; ++k) {
          double r = 0.0;
          for (int i = 0; i < dim; ++i) r += q(i, k) * q(i, j);
          for (int i = 0; i < dim; ++i) q(i, j) -= r * q(i, k);
        }
      }
      norm = 0.0;
      for (int i = 0; i < dim; ++i) norm += q(i, j) * q(i, j);
      norm = std::sqrt(norm);
    } while (norm < 1e-8);  // a degenerate draw is redrawn, deterministically
    for (int i = 0; i < dim; ++i) q(i, j) /= norm;
  }
  return q;
}

namespace {

la::Matrix conjugate_diagonal(Rng& rng, int dim, const std::vector<double>& eigs) {
  la::Matrix q = random_orthogonal(rng, dim);
  la::Matrix m = q.transpose() * la::Matrix::diagonal(eigs) * q;
  m.symmetrize();
  return m;
}

}  // namespace

la::Matrix random_spd(Rng& rng, int dim, double eig_lo, double eig_hi) {
  std::vector<double> eigs(dim);
  for (double& e : eigs) e = log_uniform(rng, eig_lo, eig_hi);
  return conjugate_diagonal(rng, dim, eigs);
}

la::Matrix random_psd(Rng& rng, int dim, double eig_hi) {
  std::uniform_real_distribution<double> u(0.0, eig_hi);
  std::vector<double> eigs(dim);
  for (double& e : eigs) e = u(rng);
  return conjugate_diagonal(rng, dim, eigs);
}

std::vector<la::Matrix> random_spd_tuple(Rng& rng, int count, int dim, double eig_lo,
                                         double eig_hi) {
  std::vector<la::Matrix> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(random_spd(rng, dim, eig_lo, eig_hi));
  return out;
}

std::vector<double> random_positive_tuple(Rng& rng, int count, double lo, double hi) {
  std::vector<double> out(count);
  for (double& v : out) v = log_uniform(rng, lo, hi);
  return out;
}

}  // namespace meanx::sample
