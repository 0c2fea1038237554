#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "skg/capacity.hpp"
#include "skg/security.hpp"

namespace skg {

enum class SecurityEvaluation { kNone, kExact, kPlugin };

struct ProtocolConfig {
  InstanceConfig instance;
  double gamma = kInfiniteGamma;
  // Target key rate R; when set, the key size is ceil(2^{nR}).
  std::optional<double> target_rate;
  std::uint64_t source_seed = 0;
  long trials = 1000;
  std::vector<int> true_states;  // empty means every state
  SecurityEvaluation security = SecurityEvaluation::kNone;
  SecurityOptions security_options;

  void validate(const CompoundSource& src) const;
};

// Smallest k with (1/n) log2 k >= rate.
int key_size_for_rate(int n, double rate);

struct TranscriptSample {
  SampleBlock block;
  AliceOutput alice;
  BobOutput bob;
  bool agreed() const { return alice.key != 0 && alice.key == bob.key; }
};

TranscriptSample run_trial(const ProtocolInstance& inst, int state, std::uint64_t seed);

struct StateReliability {
  int state = 0;
  long trials = 0;
  long disagreements = 0;
  long alice_failures = 0;  // no class or no codeword
  long bob_failures = 0;    // Bob's decoder found no unique index
  long misestimated = 0;    // class estimate differs from the true state's class
  double rate = 0.0;
  double ci_low = 0.0, ci_high = 0.0;  // Wilson interval at 3 sigma
};

struct ConditionCheck {
  bool evaluated = false;
  bool pass = false;
  double value = 0.0;
  double limit = 0.0;
};

struct RunReport {
  int n = 0;
  int key_size = 1;
  double key_rate = 0.0;
  double public_rate = 0.0;
  double target_rate = 0.0;
  std::vector<CodebookSizes> sizes;  // per class
  std::vector<StateReliability> reliability;
  std::optional<SecurityAssessment> security;
  ConditionCheck public_rate_condition;  // (1/n) log ||f_c|| < gamma + delta
  ConditionCheck key_rate_condition;     // R < (1/n) log k + delta
  ConditionCheck reliability_condition;  // max_s Pr(K_A != K_B) < delta
  ConditionCheck secrecy_condition;      // max_s S(K|V) < delta, full conditioning
};

RunReport run_protocol(const CompoundSource& src, const ProtocolConfig& cfg);

enum class SweepAxis { kN, kGamma, kRate, kSeed };

SweepAxis parse_sweep_axis(const std::string& name);
std::string to_string(SweepAxis axis);

struct SweepTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct SweepOptions {
  // Used by the gamma axis.
  int u_size = 1;
  int v_size = 2;
  SearchConfig search;
};

// One row per value. n, rate and seed rerun the protocol; gamma evaluates the
// lower bound.
SweepTable sweep(const CompoundSource& src, const ProtocolConfig& cfg, SweepAxis axis,
                 const std::vector<double>& values, const SweepOptions& opt = {});

}  // namespace skg
