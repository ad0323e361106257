#include "vlcurate/matrix_io.hpp"

#include <cstdio>
#include <sstream>
#include <string>

namespace vlcurate {

namespace {

bool next_content_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line.front() == '#') continue;
    return true;
  }
  return false;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

MatrixFile read_matrix(std::istream& in) {
  std::string line;
  if (!next_content_line(in, line)) throw InputError("matrix file is empty");
  std::istringstream header(line);
  long long rows = -1;
  long long cols = -1;
  header >> rows >> cols;
  if (!header || rows < 0 || cols < 0) {
    throw InputError("matrix header must be 'rows cols [tau]'");
  }
  MatrixFile file;
  double tau = 0.0;
  if (header >> tau) file.tau = tau;
  file.values.resize(rows, cols);
  for (long long r = 0; r < rows; ++r) {
    if (!next_content_line(in, line)) {
      throw InputError("matrix file ends after " + std::to_string(r) + " of " +
                       std::to_string(rows) + " rows");
    }
    std::istringstream row(line);
    for (long long c = 0; c < cols; ++c) {
      if (!(row >> file.values(r, c))) {
        throw InputError("matrix row " + std::to_string(r) + " has fewer than " +
                         std::to_string(cols) + " values");
      }
    }
    std::string extra;
    if (row >> extra) {
      throw InputError("matrix row " + std::to_string(r) + " has extra values");
    }
  }
  if (next_content_line(in, line)) {
    throw InputError("matrix file has more than " + std::to_string(rows) + " rows");
  }
  return file;
}

void write_matrix(std::ostream& out, const Matrix& m, std::optional<double> tau) {
  out << m.rows() << ' ' << m.cols();
  if (tau) out << ' ' << format_double(*tau);
  out << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ' ';
      out << format_double(m(r, c));
    }
    out << '\n';
  }
}

std::vector<std::size_t> read_labels(std::istream& in) {
  std::vector<std::size_t> labels;
  std::string line;
  while (next_content_line(in, line)) {
    std::istringstream is(line);
    long long v = -1;
    std::string extra;
    if (!(is >> v) || v < 0 || (is >> extra)) {
      throw InputError("label line '" + line + "' is not a non-negative integer");
    }
    labels.push_back(static_cast<std::size_t>(v));
  }
  return labels;
}

void write_labels(std::ostream& out, const std::vector<std::size_t>& labels) {
  for (std::size_t y : labels) out << y << '\n';
}

}  // namespace vlcurate
