#include <gtest/gtest.h>

#include <sstream>

#include "radcom/channel.hpp"

using namespace radcom;

TEST(Channel, Deterministic) {
  const auto a = generate_channel(20, 4, 42);
  const auto b = generate_channel(20, 4, 42);
  EXPECT_EQ(a.h.rows(), 20);
  EXPECT_EQ(a.h.cols(), 4);
  EXPECT_TRUE(a.h == b.h);
  const auto s = generate_channel(1, 1, 9);
  EXPECT_TRUE(std::isfinite(s.h(0, 0).real()));
  EXPECT_TRUE(s.h == generate_channel(1, 1, 9).h);
}

TEST(Channel, DistinctSeedsDiffer) {
  std::vector<Matrix> seen;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const Matrix h = generate_channel(4, 2, s).h;
    for (const auto& prev : seen) EXPECT_FALSE(prev == h);
    seen.push_back(h);
  }
}

TEST(Channel, UnitVarianceStatistics) {
  const Matrix h = generate_channel(1000, 100, 7).h;
  const double n = static_cast<double>(h.size());
  const Complex m = h.sum() / n;
  const double var = (h.array() - m).abs2().sum() / n;
  const double var_re = (h.real().array() - m.real()).square().sum() / n;
  EXPECT_LT(std::abs(m), 0.02);
  EXPECT_GE(var, 0.98);
  EXPECT_LE(var, 1.02);
  EXPECT_NEAR(var_re, 0.5, 0.01);
}

TEST(Channel, DeriveSeedSeparatesStreams) {
  EXPECT_NE(derive_seed(1, 1, 0), derive_seed(1, 2, 0));
  EXPECT_NE(derive_seed(1, 1, 0), derive_seed(1, 1, 1));
  EXPECT_NE(derive_seed(1, 1, 0), derive_seed(2, 1, 0));
  EXPECT_EQ(derive_seed(5, 3, 8), derive_seed(5, 3, 8));
}

TEST(Partition, SplitsAndRestacks) {
  const auto ch = generate_channel(20, 4, 3);
  const auto p = partition(ch, 14, 6);
  EXPECT_EQ(p.f.rows(), 14);
  EXPECT_EQ(p.g.rows(), 6);
  EXPECT_EQ(p.f.cols(), 4);
  Matrix stacked(20, 4);
  stacked << p.f, p.g;
  EXPECT_TRUE(stacked == ch.h);
}

TEST(Partition, DegenerateSplits) {
  const auto ch = generate_channel(5, 2, 3);
  const auto all_radar = partition(ch, 5, 0);
  EXPECT_TRUE(all_radar.f == ch.h);
  EXPECT_EQ(all_radar.g.rows(), 0);
  const auto all_comm = partition(ch, 0, 5);
  EXPECT_TRUE(all_comm.g == ch.h);
  EXPECT_THROW(partition(ch, 3, 3), DimensionError);
}

TEST(MatrixCsv, RoundTripIsExact) {
  const Matrix h = generate_channel(3, 5, 11).h;
  std::stringstream ss;
  write_matrix_csv(ss, h);
  const Matrix back = read_matrix_csv(ss);
  EXPECT_TRUE(back == h);
}
