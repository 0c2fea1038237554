#include "skg/rng.hpp"

#include <algorithm>

namespace skg {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, StreamTag tag) {
  std::uint64_t s = master;
  std::uint64_t a = splitmix64(s);
  s = a ^ (static_cast<std::uint64_t>(tag) * 0xD6E8FEB86659FD93ULL);
  std::uint64_t b = splitmix64(s);
  s = b ^ (index * 0xA0761D6478BD642FULL + 0xE7037ED1A0B428DBULL);
  return splitmix64(s);
}

std::uint64_t Rng::below(std::uint64_t n) {
  // Rejection keeps the draw exactly uniform.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t r;
  do {
    r = eng_();
  } while (r >= limit);
  return r % n;
}

CategoricalSampler::CategoricalSampler(const Eigen::VectorXd& mass) {
  cdf_.resize(mass.size());
  double acc = 0.0;
  for (Eigen::Index i = 0; i < mass.size(); ++i) {
    acc += mass(i);
    cdf_[i] = acc;
  }
  // Zero-mass tail symbols must never be drawn, so pin the last positive entry.
  Eigen::Index last = mass.size() - 1;
  while (last > 0 && mass(last) <= 0.0) --last;
  for (Eigen::Index i = last; i < mass.size(); ++i) cdf_[i] = 1.0;
}

int CategoricalSampler::operator()(Rng& rng) const {
  const double u = rng.uniform();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return static_cast<int>(it - cdf_.begin());
}

}  // namespace skg
