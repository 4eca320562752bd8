#include "mixnoise/grid.hpp"

#include <cmath>
#include <string>

#include "mixnoise/errors.hpp"

namespace mixnoise {

void TimeGrid::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("grid: dt must be positive");
  if (!std::isfinite(t0)) throw ParameterError("grid: t0 must be finite");
  if (n_steps < 2) throw ParameterError("grid: need at least 2 points");
}

std::size_t TimeGrid::index_of(double t) const {
  double k = std::round((t - t0) / dt);
  if (k < 0.0 || k > static_cast<double>(n_steps - 1))
    throw ParameterError("grid: time " + std::to_string(t) + " outside grid");
  return static_cast<std::size_t>(k);
}

TimeGrid TimeGrid::span(double t0, double t_end, double dt) {
  if (!(dt > 0.0)) throw ParameterError("grid: dt must be positive");
  if (!(t_end > t0)) throw ParameterError("grid: t_end must exceed t0");
  double steps = std::round((t_end - t0) / dt);
  TimeGrid g{t0, dt, static_cast<std::size_t>(steps) + 1};
  g.validate();
  return g;
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
    : seed_(master_seed), index_(stream_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(stream_index), static_cast<std::uint32_t>(stream_index >> 32),
                    0x6d69786eU};
  engine_.seed(seq);
}

}  // namespace mixnoise
