#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace mixnoise {

struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Two paths on different grids were combined.
struct IncompatiblePathError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-finite amplitudes during integration.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, std::size_t step,
                  std::optional<std::size_t> trajectory = std::nullopt,
                  std::optional<std::uint64_t> seed = std::nullopt)
      : std::runtime_error(what), step_(step), trajectory_(trajectory), seed_(seed) {}

  std::size_t step() const { return step_; }
  std::optional<std::size_t> trajectory() const { return trajectory_; }
  std::optional<std::uint64_t> seed() const { return seed_; }

 private:
  std::size_t step_;
  std::optional<std::size_t> trajectory_;
  std::optional<std::uint64_t> seed_;
};

}  // namespace mixnoise
