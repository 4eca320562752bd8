#include <gtest/gtest.h>

#include "mixnoise/errors.hpp"
#include "mixnoise/grid.hpp"

using namespace mixnoise;

TEST(TimeGrid, SpanCountsEndpoints) {
  const TimeGrid g = TimeGrid::span(0.0, 20.0, 1e-3);
  EXPECT_EQ(g.n_steps, 20001u);
  EXPECT_DOUBLE_EQ(g.t_end(), 20.0);
  EXPECT_DOUBLE_EQ(g.duration(), 20.0);
  EXPECT_EQ(g.index_of(10.0), 10000u);
}

TEST(TimeGrid, RejectsBadInput) {
  EXPECT_THROW(TimeGrid::span(0.0, 1.0, 0.0), ParameterError);
  EXPECT_THROW(TimeGrid::span(1.0, 1.0, 0.1), ParameterError);
  EXPECT_THROW((TimeGrid{0.0, 0.1, 1}.validate()), ParameterError);
  EXPECT_THROW(TimeGrid::span(0.0, 1.0, 0.1).index_of(5.0), ParameterError);
}

TEST(RngStream, SameKeySameSequence) {
  RngStream a(42, 7), b(42, 7);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.normal(), b.normal());
}

TEST(RngStream, DistinctIndicesDiverge) {
  RngStream a(42, 0), b(42, 1), c(43, 0), d(42, std::uint64_t{1} << 32);
  const double x = a.uniform();
  EXPECT_NE(x, b.uniform());
  EXPECT_NE(x, c.uniform());
  EXPECT_NE(x, d.uniform());
}
