#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace mixnoise {

// Uniform time grid; n_steps counts grid points, so T = dt*(n_steps-1).
struct TimeGrid {
  double t0 = 0.0;
  double dt = 1e-3;
  std::size_t n_steps = 20001;

  double duration() const { return dt * static_cast<double>(n_steps - 1); }
  double time(std::size_t n) const { return t0 + dt * static_cast<double>(n); }
  double t_end() const { return time(n_steps - 1); }
  // Index of the grid point nearest to t.
  std::size_t index_of(double t) const;
  void validate() const;

  static TimeGrid span(double t0, double t_end, double dt);

  bool operator==(const TimeGrid&) const = default;
};

struct SampledPath {
  TimeGrid grid;
  std::vector<double> values;
};

// Reproducible stream keyed by (master seed, stream index).
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  bool bernoulli(double p) { return uniform() < p; }

  std::uint64_t master_seed() const { return seed_; }
  std::uint64_t stream_index() const { return index_; }

 private:
  std::uint64_t seed_;
  std::uint64_t index_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace mixnoise
