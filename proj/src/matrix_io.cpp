#include "meanx/matrix_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "meanx/errors.hpp"

namespace meanx::io {

namespace {

[[noreturn]] void parse_fail(int line, const std::string& why) {
  throw ParseError("line " + std::to_string(line) + ": " + why);
}

bool is_blank_or_comment(const std::string& line) {
  for (char c : line) {
    if (c == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

struct LineReader {
  std::istream& in;
  int number = 0;

  bool next(std::string& out) {
    while (std::getline(in, out)) {
      ++number;
      return true;
    }
    return false;
  }
};

}  // namespace

std::vector<la::Matrix> read_matrices(std::istream& in) {
  std::vector<la::Matrix> out;
  LineReader reader{in};
  std::string line;

  while (true) {
    // hunt for the next dimension line
    bool found = false;
    while (reader.next(line)) {
      if (!is_blank_or_comment(line)) {
        found = true;
        break;
      }
    }
    if (!found) return out;

    std::istringstream head(line);
    long long dim = 0;
    if (!(head >> dim)) parse_fail(reader.number, "expected a matrix dimension");
    std::string trailing;
    if (head >> trailing) parse_fail(reader.number, "unexpected token after dimension");
    if (dim < 1 || dim > la::kMaxDim)
      parse_fail(reader.number,
                 "dimension " + std::to_string(dim) + " outside [1, " +
                     std::to_string(la::kMaxDim) + "]");

    la::Matrix m(static_cast<int>(dim));
    for (int i = 0; i < dim; ++i) {
      std::string row;
      do {
        if (!reader.next(row))
          parse_fail(reader.number + 1, "unexpected end of file inside a matrix");
      } while (row.find('#') == 0);
      std::istringstream cells(row);
      for (int j = 0; j < dim; ++j) {
        double v = 0.0;
        if (!(cells >> v))
          parse_fail(reader.number,
                     "expected " + std::to_string(dim) + " entries in matrix row");
        m(i, j) = v;
      }
      if (cells >> trailing) parse_fail(reader.number, "extra entries in matrix row");
    }
    la::validate_spd(m, "matrix " + std::to_string(out.size() + 1));
    out.push_back(std::move(m));
  }
}

std::vector<la::Matrix> read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return read_matrices(in);
}

namespace {

void append_entry(std::string& buf, double v) {
  char tmp[64];
  std::snprintf(tmp, sizeof tmp, "%.17g", v);
  buf += tmp;
}

}  // namespace

std::string format_matrix(const la::Matrix& m) {
  std::string buf = std::to_string(m.dim());
  buf += '\n';
  for (int i = 0; i < m.dim(); ++i) {
    for (int j = 0; j < m.dim(); ++j) {
      if (j) buf += ' ';
      append_entry(buf, m(i, j));
    }
    buf += '\n';
  }
  return buf;
}

void write_matrix(std::ostream& out, const la::Matrix& m) { out << format_matrix(m); }

void write_matrices(std::ostream& out, const std::vector<la::Matrix>& ms) {
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (i) out << '\n';
    write_matrix(out, ms[i]);
  }
}

std::vector<double> read_scalars(std::istream& in) {
  std::vector<double> out;
  LineReader reader{in};
  std::string line;
  while (reader.next(line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream cells(line);
    std::string token;
    while (cells >> token) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(token, &used);
      } catch (const std::exception&) {
        parse_fail(reader.number, "'" + token + "' is not a number");
      }
      if (used != token.size()) parse_fail(reader.number, "'" + token + "' is not a number");
      out.push_back(v);
    }
  }
  return out;
}

std::vector<double> read_scalar_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return read_scalars(in);
}

}  // namespace meanx::io
