#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "meanx/linalg.hpp"

namespace meanx::io {

// Matrix text format: a matrix is a line holding the dimension d followed by
// d lines of d whitespace-separated decimals. Multiple matrices are separated
// by blank lines. Lines starting with '#' are comments. Every matrix is
// validated as symmetric positive definite on load.
std::vector<la::Matrix> read_matrices(std::istream& in);
std::vector<la::Matrix> read_matrix_file(const std::string& path);

void write_matrix(std::ostream& out, const la::Matrix& m);
void write_matrices(std::ostream& out, const std::vector<la::Matrix>& ms);
std::string format_matrix(const la::Matrix& m);

// Scalar input files: whitespace-separated decimals, '#' comment lines.
std::vector<double> read_scalars(std::istream& in);
std::vector<double> read_scalar_file(const std::string& path);

}  // namespace meanx::io
