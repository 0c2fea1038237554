#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "skg/aux_channels.hpp"

namespace skg {

inline constexpr double kInfiniteGamma = std::numeric_limits<double>::infinity();

struct DegradedCapacity {
  double value = 0.0;              // clamped at 0
  double raw = 0.0;
  std::vector<double> per_class;   // min_r I(X;Y_r) - max_t I(X;Z_t), unclamped
  bool clamped = false;
  bool degraded = false;           // check_degraded outcome
  std::vector<std::string> flags;
};

// min over classes of { min_r I(X;Y_r) - max_t I(X;Z_t) } over the members.
DegradedCapacity degraded_capacity(const CompoundSource& src);

// The four information terms of one auxiliary candidate for one class.
struct AuxTerms {
  double min_i_vy_given_u = 0.0;   // min_s I(V;Y_s|U)
  double max_i_vz_given_u = 0.0;   // max_s I(V;Z_s|U)
  double max_i_ux_given_y = 0.0;   // max_s I(U;X|Y_s)
  double max_i_vx_given_uy = 0.0;  // max_s I(V;X|U,Y_s)
  double objective() const { return min_i_vy_given_u - max_i_vz_given_u; }
  double public_rate() const { return max_i_ux_given_y + max_i_vx_given_uy; }
};

AuxTerms aux_terms(const CompoundSource& src, const std::vector<int>& members,
                   const AuxChannelPair& aux);

struct SearchConfig {
  int grid = 32;                     // simplex grid resolution 1/q
  std::uint64_t max_grid_points = 200000;
  std::uint64_t sample_seed = 0;     // used when the grid is sampled
  int restarts = 4;                  // best seeds refined by coordinate ascent
  int max_sweeps = 200;
  double tol = 1e-7;
};

inline constexpr double kConstraintMargin = 1e-9;

struct ClassRate {
  int class_index = 0;
  bool feasible = false;
  double value = 0.0;               // objective of the best feasible candidate
  AuxTerms terms;
  std::optional<AuxChannelPair> optimizer;
  double constraint_slack = 0.0;    // gamma - public_rate; +inf when gamma is infinite
  std::uint64_t grid_points = 0;
  bool grid_sampled = false;
  int sweeps = 0;
};

struct RateReport {
  double value = 0.0;   // clamped at 0
  double raw = 0.0;     // min over classes, before clamping
  bool clamped = false;
  std::vector<ClassRate> per_class;
  double gamma = kInfiniteGamma;
  int u_size = 1, v_size = 1;
  SearchConfig config;
  std::vector<std::string> flags;
};

// Lower bound: for each class maximise min_s I(V;Y_s|U) - max_s I(V;Z_s|U)
// subject to max_s I(U;X|Y_s) + max_s I(V;X|U,Y_s) <= gamma - 1e-9, then take
// the minimum over classes. `seeds` (one list per class, may be empty) join the
// grid seeds.
RateReport secret_key_lower_bound(const CompoundSource& src, double gamma, int u_size,
                                  int v_size, const SearchConfig& cfg,
                                  const std::vector<std::vector<AuxChannelPair>>& seeds = {});

struct MultiLetterRate {
  int n = 1;
  double value = 0.0;      // a_n / n
  double a_n = 0.0;
  RateReport single_letter;  // n = 1 search, seeds the block search
  RateReport block;
};

// Lower bound on the n-letter block source with gamma = inf, divided by n.
// u_size and v_size are per-letter; the block search uses u_size^n and
// v_size^n and is seeded with n-fold products of the single-letter optimiser.
MultiLetterRate multi_letter_rate(const CompoundSource& src, int n, int u_size, int v_size,
                                  const SearchConfig& cfg,
                                  int max_alphabet = kMaxProductAlphabet);

struct QuantizedFamily {
  int l = 0;
  std::vector<Channel> net;
  std::vector<int> assignment;     // original index -> net index
  double max_abs_diff = 0.0;       // max |W - W'| over all entries
  double max_ratio = 0.0;          // max W / W' over entries with W > 0
  double ratio_limit = 0.0;        // e^{2 |U|^2 / l}
  double log2_net_limit = 0.0;     // |X||U| log2(l+1)
};

// Rounds every channel onto the 1/l lattice and checks |W - W'| <= |U|/l and
// W <= e^{2|U|^2/l} W' entrywise. Requires l >= 2|U|^2.
QuantizedFamily quantize_family(const std::vector<Channel>& family, int l);

// 3 gamma log2(|X||Y| - 1) + 3 h(gamma), for 0 <= gamma <= 1 - 1/(|X||Y|).
double mi_continuity_bound(double gamma, int x_size, int y_size);

struct ConverseIdentityEntry {
  int class_index = 0;
  int r = 0, t = 0;
  bool checked = false;
  double lhs = 0.0;   // I(X;Y_r) - I(X;Z_t)
  double rhs = 0.0;   // I(X;Y|Z) under P_{XY,r} D(z|y)
  double error = 0.0;
  std::string note;
};

struct ConverseIdentityReport {
  bool degraded = false;
  double max_error = 0.0;
  std::vector<ConverseIdentityEntry> entries;
};

ConverseIdentityReport converse_identity_check(const CompoundSource& src, double tol = 1e-9);

}  // namespace skg
