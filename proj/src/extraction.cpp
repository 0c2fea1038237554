#include "skg/extraction.hpp"

#include <cmath>

#include "skg/rng.hpp"

namespace skg {

double security_index(const JointPmf& kv, int k) {
  if (kv.rank() != 2) throw SpecError("security_index: joint must be over (K, V)");
  if (k < 1 || kv.dim(0) > k) throw SpecError("security_index: key alphabet larger than k");
  const double h_k_given_v = conditional_entropy(kv, {0}, {1});
  return std::log2(static_cast<double>(k)) - h_k_given_v;
}

KeyExtractor::KeyExtractor(std::vector<int> table, int k, std::uint64_t seed)
    : table_(std::move(table)), k_(k), seed_(seed) {
  if (k < 1) throw DomainError("KeyExtractor: k must be positive");
  for (int v : table_)
    if (v < 1 || v > k) throw SpecError("KeyExtractor: table value outside 1..k");
}

KeyExtractor draw_extractor(std::uint64_t domain_size, int k, std::uint64_t seed) {
  if (domain_size < 1) throw DomainError("draw_extractor: empty domain");
  if (k < 1) throw DomainError("draw_extractor: k must be positive");
  Rng rng(seed);
  std::vector<int> table(domain_size);
  for (auto& v : table) v = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
  return KeyExtractor(std::move(table), k, seed);
}

Pmf pushforward(const KeyExtractor& kappa, const Pmf& p) {
  if (static_cast<std::uint64_t>(p.size()) != kappa.domain_size())
    throw SpecError("pushforward: distribution size differs from extractor domain");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(kappa.key_size());
  for (int c = 0; c < p.size(); ++c) out(kappa(c) - 1) += p(c);
  out /= out.sum();
  return Pmf(std::move(out));
}

double extractor_deviation_bound(double lambda, double eps, double eta, int k) {
  if (!(lambda > 0.0)) throw DomainError("extractor_deviation_bound: lambda must be positive");
  if (!(eps > 0.0)) throw DomainError("extractor_deviation_bound: eps must be positive");
  if (!(eta >= 0.0 && eta < 1.0)) throw DomainError("extractor_deviation_bound: eta must lie in [0,1)");
  if (k < 1) throw DomainError("extractor_deviation_bound: k must be positive");
  const double kd = static_cast<double>(k);
  return 2.0 * kd * std::exp(-lambda * eps * eps * (1.0 - eta) / (2.0 * kd * (1.0 + eps)));
}

double good_set_security_bound(double alpha, double eta, int k) {
  const double a = alpha + eta;
  if (!(alpha >= 0.0 && eta >= 0.0 && a <= 1.0))
    throw DomainError("good_set_security_bound: alpha + eta must lie in [0,1]");
  return (alpha + 2.0 * eta) * std::log2(static_cast<double>(k)) + binary_entropy(a);
}

}  // namespace skg
