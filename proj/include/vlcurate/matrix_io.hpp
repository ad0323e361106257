#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <vector>

#include "vlcurate/hnnce.hpp"

namespace vlcurate {

// Text matrix file: a header line "rows cols [tau]" followed by `rows` lines
// of `cols` whitespace-separated values (row-major). Lines starting with '#'
// are ignored.
struct MatrixFile {
  Matrix values;
  std::optional<double> tau;
};

MatrixFile read_matrix(std::istream& in);
void write_matrix(std::ostream& out, const Matrix& m,
                  std::optional<double> tau = std::nullopt);

// One non-negative integer per line.
std::vector<std::size_t> read_labels(std::istream& in);
void write_labels(std::ostream& out, const std::vector<std::size_t>& labels);

}  // namespace vlcurate
