#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace skg {

enum class StreamTag : std::uint64_t {
  kSource = 1,
  kCodebook = 2,
  kExtractor = 3,
  kEstimation = 4,
  kAuxiliary = 5,
};

std::uint64_t splitmix64(std::uint64_t& state);

// Independent stream seed for (master, index, purpose). Streams are a pure
// function of these three values, so results do not depend on thread count.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, StreamTag tag);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform on [0,1) with 53 random bits; platform independent.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  std::uint64_t bits() { return eng_(); }
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 eng_;
};

// Inverse-CDF sampler over {0..m-1}.
class CategoricalSampler {
 public:
  CategoricalSampler() = default;
  explicit CategoricalSampler(const Eigen::VectorXd& mass);
  int operator()(Rng& rng) const;
  int size() const { return static_cast<int>(cdf_.size()); }

 private:
  std::vector<double> cdf_;
};

}  // namespace skg
