#include "meanx/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace meanx::la {

namespace {

void check_dim(int dim) {
  if (dim < 1 || dim > kMaxDim)
    throw DimensionError("matrix dimension " + std::to_string(dim) + " outside [1, " +
                         std::to_string(kMaxDim) + "]");
}

void check_same(const Matrix& a, const Matrix& b) {
  if (a.dim() != b.dim())
    throw DimensionError("matrix dimensions differ: " + std::to_string(a.dim()) + " vs " +
                         std::to_string(b.dim()));
}

}  // namespace

Matrix::Matrix(int dim) : dim_(dim) {
  check_dim(dim);
  a_.assign(static_cast<std::size_t>(dim) * dim, 0.0);
}

Matrix::Matrix(int dim, std::vector<double> data) : dim_(dim), a_(std::move(data)) {
  check_dim(dim);
  if (a_.size() != static_cast<std::size_t>(dim) * dim)
    throw DimensionError("matrix data size " + std::to_string(a_.size()) +
                         " does not match dimension " + std::to_string(dim));
}

Matrix Matrix::identity(int dim) {
  Matrix m(dim);
  for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> entries) {
  Matrix m(static_cast<int>(entries.size()));
  for (int i = 0; i < m.dim(); ++i) m(i, i) = entries[i];
  return m;
}

Matrix& Matrix::operator+=(const Matrix& o) {
  check_same(*this, o);
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  check_same(*this, o);
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& v : a_) v *= s;
  return *this;
}

Matrix Matrix::transpose() const {
  Matrix t(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

void Matrix::symmetrize() {
  for (int i = 0; i < dim_; ++i)
    for (int j = i + 1; j < dim_; ++j) {
      const double v = 0.5 * ((*this)(i, j) + (*this)(j, i));
      (*this)(i, j) = v;
      (*this)(j, i) = v;
    }
}

double Matrix::frobenius_norm() const {
  double acc = 0.0;
  for (double v : a_) acc += v * v;
  return std::sqrt(acc);
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double v : a_) m = std::max(m, std::abs(v));
  return m;
}

double Matrix::max_asymmetry() const {
  double m = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = i + 1; j < dim_; ++j)
      m = std::max(m, std::abs((*this)(i, j) - (*this)(j, i)));
  return m;
}

Matrix operator+(Matrix a, const Matrix& b) {
  a += b;
  return a;
}

Matrix operator-(Matrix a, const Matrix& b) {
  a -= b;
  return a;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  check_same(a, b);
  const int n = a.dim();
  Matrix c(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Matrix operator*(double s, Matrix a) {
  a *= s;
  return a;
}

EigenDecomposition sym_eigen(const Matrix& input) {
  const int n = input.dim();
  check_dim(n);
  Matrix a = input;
  a.symmetrize();
  Matrix v = Matrix::identity(n);

  const double scale = a.frobenius_norm();
  const double thresh = 1e-14 * scale;

  auto off_norm = [&a, n]() {
    double acc = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) acc += 2.0 * a(p, q) * a(p, q);
    return std::sqrt(acc);
  };

  if (scale > 0.0) {
    int sweep = 0;
    for (; sweep < 100; ++sweep) {
      if (off_norm() <= thresh) break;
      for (int p = 0; p < n - 1; ++p) {
        for (int q = p + 1; q < n; ++q) {
          const double apq = a(p, q);
          if (apq == 0.0) continue;
          // Stable rotation choice: the smaller root of t^2 + 2t*tau - 1 = 0.
          const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
          const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
          const double c = 1.0 / std::sqrt(1.0 + t * t);
          const double s = t * c;

          const double app = a(p, p);
          const double aqq = a(q, q);
          a(p, p) = app - t * apq;
          a(q, q) = aqq + t * apq;
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          for (int i = 0; i < n; ++i) {
            if (i == p || i == q) continue;
            const double aip = a(i, p);
            const double aiq = a(i, q);
            a(i, p) = c * aip - s * aiq;
            a(p, i) = a(i, p);
            a(i, q) = s * aip + c * aiq;
            a(q, i) = a(i, q);
          }
          for (int i = 0; i < n; ++i) {
            const double vip = v(i, p);
            const double viq = v(i, q);
            v(i, p) = c * vip - s * viq;
            v(i, q) = s * vip + c * viq;
          }
        }
      }
    }
    if (sweep == 100 && off_norm() > thresh)
      throw NumericError("Jacobi eigensolver missed its threshold within 100 sweeps");
  }

  EigenDecomposition out;
  out.values.resize(n);
  for (int i = 0; i < n; ++i) out.values[i] = a(i, i);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&out](int x, int y) { return out.values[x] > out.values[y]; });

  EigenDecomposition sorted;
  sorted.values.resize(n);
  sorted.vectors = Matrix(n);
  for (int j = 0; j < n; ++j) {
    sorted.values[j] = out.values[order[j]];
    for (int i = 0; i < n; ++i) sorted.vectors(i, j) = v(i, order[j]);
  }
  return sorted;
}

namespace {

Matrix from_spectrum(const EigenDecomposition& ed, const std::function<double(double)>& f) {
  const int n = ed.vectors.dim();
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) {
    w[i] = f(ed.values[i]);
    if (!std::isfinite(w[i]))
      throw NumericError("matrix function undefined at eigenvalue " +
                         std::to_string(ed.values[i]));
  }
  Matrix r(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += ed.vectors(i, k) * w[k] * ed.vectors(j, k);
      r(i, j) = acc;
      r(j, i) = acc;
    }
  return r;
}

}  // namespace

Matrix matrix_function(const Matrix& m, const std::function<double(double)>& f) {
  return from_spectrum(sym_eigen(m), f);
}

Matrix matrix_sqrt(const Matrix& m) {
  return matrix_function(m, [](double x) { return std::sqrt(x); });
}

Matrix matrix_inv_sqrt(const Matrix& m) {
  return matrix_function(m, [](double x) { return 1.0 / std::sqrt(x); });
}

Matrix matrix_inverse(const Matrix& m) {
  return matrix_function(m, [](double x) { return 1.0 / x; });
}

Matrix matrix_log(const Matrix& m) {
  return matrix_function(m, [](double x) { return std::log(x); });
}

Matrix matrix_exp(const Matrix& m) {
  return matrix_function(m, [](double x) { return std::exp(x); });
}

Matrix matrix_power(const Matrix& m, double alpha) {
  return matrix_function(m, [alpha](double x) { return std::pow(x, alpha); });
}

bool loewner_leq(const Matrix& a, const Matrix& b, double slack) {
  check_same(a, b);
  return min_eigenvalue(b - a) >= -slack;
}

namespace {

// Spectrum of b^{-1/2} a b^{-1/2}; carries both extremal multipliers.
std::pair<double, double> congruence_extremes(const Matrix& a, const Matrix& b) {
  check_same(a, b);
  Matrix bi = matrix_inv_sqrt(b);
  Matrix s = bi * a * bi;
  s.symmetrize();
  auto ed = sym_eigen(s);
  return {ed.values.back(), ed.values.front()};
}

}  // namespace

double m_ratio(const Matrix& a, const Matrix& b) { return congruence_extremes(a, b).second; }

double thompson_distance(const Matrix& a, const Matrix& b) {
  auto [lo, hi] = congruence_extremes(a, b);
  if (!(lo > 0.0) || !(hi > 0.0))
    throw DomainError("thompson_distance: operands must be positive definite");
  // m_ratio(b,a) is 1/lo, so the two logs come from one spectrum.
  return std::max(std::log(hi), -std::log(lo));
}

double order_unit_norm(const Matrix& m) {
  auto ed = sym_eigen(m);
  return std::max(std::abs(ed.values.front()), std::abs(ed.values.back()));
}

double min_eigenvalue(const Matrix& m) { return sym_eigen(m).values.back(); }

double max_eigenvalue(const Matrix& m) { return sym_eigen(m).values.front(); }

void validate_spd(const Matrix& m, const std::string& what) {
  if (m.empty()) throw DimensionError(what + " is empty");
  const double scale = m.max_abs();
  if (m.max_asymmetry() > 1e-9 * std::max(scale, 1e-300))
    throw DomainError(what + " is not symmetric (max asymmetry " +
                      std::to_string(m.max_asymmetry()) + ")");
  auto ed = sym_eigen(m);
  const double lo = ed.values.back();
  const double hi = ed.values.front();
  if (!(lo > 1e-12 * hi) || !(hi > 0.0))
    throw DomainError(what + " is not positive definite (eigenvalue " + std::to_string(lo) + ")");
}

OrderInterval smallest_enclosing_interval(std::span<const Matrix> xs) {
  if (xs.empty()) throw DimensionError("smallest_enclosing_interval: empty tuple");
  double bound = 1.0;
  for (const Matrix& x : xs) {
    auto ed = sym_eigen(x);
    const double lo = ed.values.back();
    const double hi = ed.values.front();
    if (!(lo > 0.0)) throw DomainError("smallest_enclosing_interval: tuple entry not positive definite");
    bound = std::max({bound, hi, 1.0 / lo});
  }
  // ceil with a hair of slack so eigenvalues sitting on an integer stay inside
  return OrderInterval{static_cast<int>(std::ceil(bound - 1e-9))};
}

}  // namespace meanx::la
