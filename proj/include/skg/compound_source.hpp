#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "skg/prob.hpp"
#include "skg/typicality.hpp"

namespace skg {

// Component order of every per-state joint.
inline constexpr int kX = 0;
inline constexpr int kY = 1;
inline constexpr int kZ = 2;

// Finite family of joint laws P_{XYZ,s} on a common alphabet triple.
class CompoundSource {
 public:
  CompoundSource(Alphabet x, Alphabet y, Alphabet z, std::vector<std::string> labels,
                 std::vector<JointPmf> joints);

  int x_size() const { return x_.size; }
  int y_size() const { return y_.size; }
  int z_size() const { return z_.size; }
  int num_states() const { return static_cast<int>(joints_.size()); }
  const std::string& label(int s) const { return labels_[s]; }
  const std::vector<std::string>& labels() const { return labels_; }
  int state_index(const std::string& label) const;

  const JointPmf& joint(int s) const { return joints_[s]; }
  JointPmf xy(int s) const { return marginalize(joints_[s], {kX, kY}); }
  JointPmf xz(int s) const { return marginalize(joints_[s], {kX, kZ}); }
  Pmf x_marginal(int s) const { return marginal(joints_[s], kX); }

 private:
  Alphabet x_, y_, z_;
  std::vector<std::string> labels_;
  std::vector<JointPmf> joints_;
};

// States sharing one X-marginal (within 1e-10 in every entry).
struct MarginalClass {
  int index = 0;
  Pmf x_marginal;
  std::vector<int> members;
};

inline constexpr double kMarginalTolerance = 1e-10;

// Classes ordered by their first member state.
std::vector<MarginalClass> marginal_partition(const CompoundSource& src);

struct SampleBlock {
  int n = 0;
  int true_state = 0;
  Sequence x, y, z;
};

SampleBlock sample_block(const CompoundSource& src, int state, int n, std::uint64_t seed);
SampleBlock sample_block(const CompoundSource& src, const std::string& label, int n,
                         std::uint64_t seed);

inline constexpr int kMaxProductAlphabet = 16;

// Source of n-letter blocks: alphabets |X|^n etc., state s maps to P_s^{(x)n}.
// Block symbols are base-|X| numerals with the first letter least significant.
CompoundSource product_source(const CompoundSource& src, int n,
                              int max_alphabet = kMaxProductAlphabet);

struct DegradedPair {
  int class_index = 0;
  int r = 0;  // state supplying P_{XY}
  int t = 0;  // state supplying P_{XZ}
  bool feasible = false;
  double residual = 0.0;          // phase-1 infeasibility (sum of artificials)
  std::optional<Channel> witness;  // D(z|y) when feasible
};

struct DegradednessReport {
  bool degraded = false;
  std::vector<DegradedPair> pairs;
};

// For every class and every ordered pair (r, t) of its members, searches a
// channel D with P_{XZ,t}(x,z) = sum_y P_{XY,r}(x,y) D(z|y).
DegradednessReport check_degraded(const CompoundSource& src, double tol = 1e-9);

}  // namespace skg
