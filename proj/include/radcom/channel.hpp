#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>

#include "radcom/types.hpp"

namespace radcom {

/// Mixes (base, stream, index) into an independent 64-bit seed. Trials seeded
/// this way are order-independent.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index = 0);

/// Entries (x + j y)/sqrt(2) with x, y standard normal.
Matrix complex_gaussian(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng);

struct ChannelRealization {
  Matrix h;  // N x K, column i is the channel to user i
  std::uint64_t seed = 0;
};

struct PartitionedChannel {
  Matrix f;  // N_R x K, radar-antenna rows
  Matrix g;  // N_C x K, communication-antenna rows
};

ChannelRealization generate_channel(int n, int k, std::uint64_t seed);

/// F takes the first n_r rows, G the remaining n_c rows.
PartitionedChannel partition(const ChannelRealization& ch, int n_r, int n_c);

// Matrix CSV: one line per row, real and imaginary parts interleaved.
void write_matrix_csv(std::ostream& os, const Matrix& m);
Matrix read_matrix_csv(std::istream& is);
void save_matrix_csv(const std::string& path, const Matrix& m);
Matrix load_matrix_csv(const std::string& path);

}  // namespace radcom
