#include "radcom/channel.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace radcom {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index) {
  return splitmix64(splitmix64(splitmix64(base) ^ stream) ^ index);
}

Matrix complex_gaussian(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double scale = 1.0 / std::sqrt(2.0);
  Matrix m(rows, cols);
  // Column-major fill keeps the draw order fixed for a given shape.
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = Complex(re * scale, im * scale);
    }
  }
  return m;
}

ChannelRealization generate_channel(int n, int k, std::uint64_t seed) {
  if (n < 1 || k < 1) throw std::invalid_argument("generate_channel: n and k must be >= 1");
  std::mt19937_64 rng(seed);
  return ChannelRealization{complex_gaussian(n, k, rng), seed};
}

PartitionedChannel partition(const ChannelRealization& ch, int n_r, int n_c) {
  if (n_r < 0 || n_c < 0 || n_r + n_c != ch.h.rows()) {
    throw DimensionError("partition: n_r + n_c must equal the antenna count " +
                         std::to_string(ch.h.rows()));
  }
  return PartitionedChannel{ch.h.topRows(n_r), ch.h.bottomRows(n_c)};
}

void write_matrix_csv(std::ostream& os, const Matrix& m) {
  char buf[64];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g", m(i, j).real(), m(i, j).imag());
      if (j > 0) os << ',';
      os << buf;
    }
    os << '\n';
  }
}

Matrix read_matrix_csv(std::istream& is) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> values;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) values.push_back(std::stod(cell));
    if (values.size() % 2 != 0) throw std::runtime_error("matrix csv: odd number of values in a row");
    if (!rows.empty() && values.size() != rows.front().size()) {
      throw std::runtime_error("matrix csv: ragged rows");
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) return Matrix(0, 0);
  const auto n_rows = static_cast<Eigen::Index>(rows.size());
  const auto n_cols = static_cast<Eigen::Index>(rows.front().size() / 2);
  Matrix m(n_rows, n_cols);
  for (Eigen::Index i = 0; i < n_rows; ++i) {
    for (Eigen::Index j = 0; j < n_cols; ++j) m(i, j) = Complex(rows[i][2 * j], rows[i][2 * j + 1]);
  }
  return m;
}

void save_matrix_csv(const std::string& path, const Matrix& m) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_matrix_csv(os, m);
}

Matrix load_matrix_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_matrix_csv(is);
}

}  // namespace radcom
