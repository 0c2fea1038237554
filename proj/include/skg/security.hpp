#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "skg/protocol_instance.hpp"

namespace skg {

enum class SecurityMode { kExact, kPlugin };

// Default cap on |X|^n |Z|^n for exact enumeration.
inline constexpr std::uint64_t kDefaultExactBudget = std::uint64_t{1} << 24;

struct SecurityOptions {
  SecurityMode mode = SecurityMode::kExact;
  std::uint64_t exact_budget = kDefaultExactBudget;
  long plugin_samples = 1000000;
  std::uint64_t plugin_seed = 0;
  // Z^n is kept verbatim when |Z|^n fits, otherwise hashed into this many buckets.
  std::uint64_t z_buckets = std::uint64_t{1} << 20;
};

// Two conditionings of the key K = kappa(C):
//   public: V = (class estimate, public indices, Z^n)
//   full:   V = (class estimate, public indices, Z^n, typical-event indicator)
// The full conditioning gives Eve strictly more and is the acceptance target.
struct StateSecurity {
  int state = 0;
  double index_full = 0.0;
  double index_public = 0.0;
  double entropy_full = 0.0;    // H(K|V) under the full conditioning
  double entropy_public = 0.0;
  long samples = 0;             // plug-in only
  // Miller-Madow estimate of the plug-in downward bias of H(K|V), in bits.
  double bias_full = 0.0;
  double bias_public = 0.0;
};

struct SecurityAssessment {
  SecurityMode mode = SecurityMode::kExact;
  int key_size = 1;
  std::vector<StateSecurity> states;
  double max_index_full = 0.0;
  double max_index_public = 0.0;
  bool z_hashed = false;
};

SecurityAssessment assess_security(const ProtocolInstance& inst, const SecurityOptions& opt);

struct GoodSetState {
  int state = 0;
  std::uint64_t size_b = 0;        // |B_s|
  double prob_b = 0.0;             // P(B_s | class estimate correct)
  double max_pair_prob = 0.0;      // max over B_s of P(c,d | class)
  std::uint64_t min_b_sd = 0;      // min over d in D_s of |B_{s,d}|
  std::uint64_t size_d_s = 0;      // |D_s|
  bool pair_mass_ok = false;       // max_pair_prob < 1/(alpha |B_s|)
  bool coverage_ok = false;        // prob_b >= 1 - (eta^2 - alpha^2)
};

struct GoodSetFamily {
  int class_index = 0;
  double alpha = 0.0, eta = 0.0, tau = 0.0;
  double prob_class = 0.0;           // P(estimate == class) under each state, min over states
  std::vector<GoodSetState> states;
  std::uint64_t min_b_sd = 0;        // over all member states
  double log2_d_alphabet = 0.0;      // log2 |D|, D = (index or 0, Z^n, indicator)
  double log2_k_limit_mass = 0.0;    // log2(alpha^6 min|B_{s,d}|)
  double log2_k_limit_size = 0.0;    // log2(e^{1/alpha} / (2 |D| |members|))
  double lambda = 0.0;               // alpha^3 min|B_{s,d}|
  bool guards_ok = false;            // alpha <= 1/6, eta <= 1/3, alpha <= eta
  int max_key_bits = -1;             // largest b with 2^b below both limits; -1 if none
  bool key_size_ok = false;          // configured k below both limits
  double security_bound = 0.0;       // (alpha + 2 eta) log2 k + h(alpha + eta)
  std::vector<std::string> failures;
};

// Literal construction for the single-layer code with exact enumeration of
// (X^n, Z^n): C = g(X^n), D_s = (f(X^n), Z^n, 1[(X^n,Z^n) in T_s]),
// B_s = {(j, (i, z, 1)) : z in T[Z_s]_xi, T[UXZ,s]_sigma(u_ij, z) nonempty},
// with alpha = 2^{-n(delta + 5 tau)} and eta = 2^{-n delta}.
GoodSetFamily build_good_sets(const ProtocolInstance& inst, int cls, double tau,
                              std::uint64_t exact_budget = kDefaultExactBudget);

}  // namespace skg
