#pragma once

#include <cstdint>
#include <vector>

#include "skg/prob.hpp"

namespace skg {

// log2 k - H(K|V) for a joint over (K,V), K taking values in a set of size k.
double security_index(const JointPmf& kv, int k);

// Uniformly random lookup table kappa: {0..domain-1} -> {1..k}.
class KeyExtractor {
 public:
  KeyExtractor() = default;
  KeyExtractor(std::vector<int> table, int k, std::uint64_t seed);

  int operator()(std::uint64_t c) const { return table_[c]; }
  std::uint64_t domain_size() const { return table_.size(); }
  int key_size() const { return k_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<int>& table() const { return table_; }

 private:
  std::vector<int> table_;
  int k_ = 1;
  std::uint64_t seed_ = 0;
};

KeyExtractor draw_extractor(std::uint64_t domain_size, int k, std::uint64_t seed);

// Distribution of kappa(C) for C ~ p over the extractor's domain.
Pmf pushforward(const KeyExtractor& kappa, const Pmf& p);

// Bound on Pr_kappa(||kappa(P) - uniform||_1 > eps + 2 eta) when P puts mass
// >= 1 - eta on symbols of mass <= 1/lambda:
// 2k exp(-lambda eps^2 (1-eta) / (2k(1+eps))).
double extractor_deviation_bound(double lambda, double eps, double eta, int k);

// (alpha + 2 eta) log2 k + h(alpha + eta), the good-set security bound.
double good_set_security_bound(double alpha, double eta, int k);

}  // namespace skg
