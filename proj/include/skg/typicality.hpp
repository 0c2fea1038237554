#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "skg/prob.hpp"

namespace skg {

using Symbol = std::uint8_t;
using Sequence = std::vector<Symbol>;
using SeqView = std::span<const Symbol>;

// Slack parameters, required to satisfy 0 < xi < zeta < sigma < vartheta.
struct TypicalityParams {
  double xi = 0.0;
  double zeta = 0.0;
  double sigma = 0.0;
  double vartheta = 0.0;

  void validate() const;
  // (0.05, 0.10, 0.15, 0.20) times the smallest positive mass.
  static TypicalityParams scaled_defaults(double min_positive_mass);
};

// Integer count windows: a count c for a cell of mass P is admissible iff
// |nP - c| <= n*eps, and c == 0 whenever P == 0.
struct CountWindow {
  std::vector<int> lo;
  std::vector<int> hi;
  bool admits(Eigen::Index cell, long c) const { return c >= lo[cell] && c <= hi[cell]; }
};
CountWindow make_count_window(const Eigen::VectorXd& mass, int n, double eps);

Eigen::VectorXi type_counts(SeqView seq, int alphabet);
// Counts over the product alphabet `dims`, flattened row-major.
Eigen::VectorXi joint_counts(std::span<const SeqView> seqs, const std::vector<int>& dims);

bool is_typical(SeqView seq, const Pmf& p, double eps);
bool is_jointly_typical(SeqView x, SeqView y, const JointPmf& pxy, double eps);
bool is_jointly_typical(std::span<const SeqView> seqs, const JointPmf& joint, double eps);

// { y : |N(a)W(b|a)/n - N(a,b)/n| <= eps, and W(b|a) == 0 => N(a,b) == 0 }.
class ConditionalTypicalSet {
 public:
  ConditionalTypicalSet(Sequence x, Channel w, double eps);
  bool contains(SeqView y) const;
  const Sequence& given() const { return x_; }

 private:
  Sequence x_;
  Channel w_;
  double eps_;
  Eigen::VectorXi nx_;
};
ConditionalTypicalSet conditional_typical_set(SeqView x, const Channel& w, double eps);

// Is there a sequence for component `free_component` that makes all
// components jointly typical? `fixed` lists the other components in order.
bool joint_section_nonempty(const JointPmf& joint, int free_component,
                            std::span<const SeqView> fixed, double eps);

// log2 of the number of sequences for `free_component` completing `fixed`
// to a jointly typical tuple; -inf when there are none.
double joint_section_log2_size(const JointPmf& joint, int free_component,
                               std::span<const SeqView> fixed, double eps);

struct TypicalProbability {
  double exact = 0.0;  // P^n(T[X]xi), exact up to floating point
  double bound = 0.0;  // 1 - 2|X| exp(-2 xi^2 n)
};
TypicalProbability typical_probability(const Pmf& p, int n, double xi);

struct TypicalSetSize {
  double log2_size = 0.0;
  double entropy = 0.0;
  double tau = 0.0;
  bool within = false;  // |(1/n) log2|T| - H| <= tau
};
TypicalSetSize typical_set_size_bounds(const Pmf& p, int n, double eps, double tau);

// log2 of sum over compositions (c_0..c_{m-1}) of `total` with c_f in
// [lo_f, hi_f] of total!/prod c_f! * prod exp(c_f * log_weight_f).
double log2_weighted_compositions(int total, std::span<const int> lo, std::span<const int> hi,
                                  std::span<const double> log_weight);

}  // namespace skg
