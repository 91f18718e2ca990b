// Dense symmetric linear algebra for the SPD cone: row-major matrices,
// a cyclic Jacobi eigensolver, functional calculus and the Thompson metric.
#pragma once

#include <functional>
#include <span>
#include <vector>

#include "meanx/errors.hpp"

namespace meanx::la {

inline constexpr int kMaxDim = 64;

class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(int dim);
  Matrix(int dim, std::vector<double> data);

  static Matrix identity(int dim);
  static Matrix diagonal(std::span<const double> entries);

  int dim() const noexcept { return dim_; }
  bool empty() const noexcept { return dim_ == 0; }

  double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * dim_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * dim_ + j]; }

  const std::vector<double>& data() const noexcept { return a_; }
  double* raw() noexcept { return a_.data(); }
  const double* raw() const noexcept { return a_.data(); }

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(double s);

  Matrix transpose() const;
  void symmetrize();  // replaces the matrix by (M + M^T)/2
  double frobenius_norm() const;
  double max_abs() const;
  double max_asymmetry() const;  // max |a_ij - a_ji|

 private:
  int dim_ = 0;
  std::vector<double> a_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator*(double s, Matrix a);

struct EigenDecomposition {
  std::vector<double> values;  // descending
  Matrix vectors;              // column i pairs with values[i]
};

// Cyclic Jacobi rotations; stops when the off-diagonal Frobenius norm falls
// below 1e-14 times the initial Frobenius norm, hard cap 100 sweeps.
EigenDecomposition sym_eigen(const Matrix& m);

// f applied to the spectrum: V diag(f(lambda)) V^T, re-symmetrized.
Matrix matrix_function(const Matrix& m, const std::function<double(double)>& f);

Matrix matrix_sqrt(const Matrix& m);
Matrix matrix_inv_sqrt(const Matrix& m);
Matrix matrix_inverse(const Matrix& m);
Matrix matrix_log(const Matrix& m);
Matrix matrix_exp(const Matrix& m);
Matrix matrix_power(const Matrix& m, double alpha);

// a <= b in the Loewner order up to slack: smallest eigenvalue of b - a
// is at least -slack.
bool loewner_leq(const Matrix& a, const Matrix& b, double slack);

// Smallest multiplier lambda with a <= lambda * b, i.e. the largest
// eigenvalue of b^{-1/2} a b^{-1/2}.
double m_ratio(const Matrix& a, const Matrix& b);

// max(log m_ratio(a,b), log m_ratio(b,a)); both ratios come from one
// congruence spectrum.
double thompson_distance(const Matrix& a, const Matrix& b);

// Largest absolute eigenvalue (the order-unit norm of a symmetric matrix).
double order_unit_norm(const Matrix& m);

double min_eigenvalue(const Matrix& m);
double max_eigenvalue(const Matrix& m);

// Throws DomainError naming `what` unless m is symmetric within 1e-9 of its
// largest entry and its smallest eigenvalue exceeds 1e-12 times its largest.
void validate_spd(const Matrix& m, const std::string& what = "matrix");

struct OrderInterval {
  int n = 1;  // the interval [(1/n) I, n I]
};

// Smallest [(1/n) I, n I] containing every entry of the tuple, from the
// extreme eigenvalues.
OrderInterval smallest_enclosing_interval(std::span<const Matrix> xs);

}  // namespace meanx::la
