#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "skg/errors.hpp"

namespace skg {

// Masses within this distance below zero are clamped; sums must be within it of 1.
inline constexpr double kProbTolerance = 1e-12;

struct Alphabet {
  int size = 0;
  Alphabet() = default;
  explicit Alphabet(int n);
};

// Validated probability vector.
class Pmf {
 public:
  Pmf() = default;
  explicit Pmf(Eigen::VectorXd mass);

  static Pmf uniform(int size);
  static Pmf point(int size, int symbol);

  int size() const { return static_cast<int>(mass_.size()); }
  double operator()(int i) const { return mass_(i); }
  const Eigen::VectorXd& mass() const { return mass_; }
  double min_positive() const;

 private:
  Eigen::VectorXd mass_;
};

// Probability tensor over a product alphabet, stored flat in row-major order
// (last component varies fastest).
class JointPmf {
 public:
  JointPmf() = default;
  JointPmf(std::vector<int> dims, Eigen::VectorXd mass);

  int rank() const { return static_cast<int>(dims_.size()); }
  const std::vector<int>& dims() const { return dims_; }
  int dim(int c) const { return dims_[c]; }
  Eigen::Index size() const { return mass_.size(); }
  const Eigen::VectorXd& mass() const { return mass_; }

  Eigen::Index flat_index(std::span<const int> idx) const;
  void unflatten(Eigen::Index flat, std::span<int> idx) const;
  double at(std::span<const int> idx) const { return mass_(flat_index(idx)); }
  double operator()(int a, int b) const;
  double operator()(int a, int b, int c) const;

  // Row-major |dim0| x |dim1| view of a rank-2 joint.
  Eigen::MatrixXd matrix() const;
  double min_positive() const;

 private:
  std::vector<int> dims_;
  Eigen::VectorXd mass_;
};

// Row-stochastic matrix: row = input symbol, column = output symbol.
class Channel {
 public:
  Channel() = default;
  explicit Channel(Eigen::MatrixXd w);

  static Channel identity(int size);
  static Channel constant(int inputs, const Pmf& out);

  int inputs() const { return static_cast<int>(w_.rows()); }
  int outputs() const { return static_cast<int>(w_.cols()); }
  double operator()(int x, int y) const { return w_(x, y); }
  const Eigen::MatrixXd& matrix() const { return w_; }

 private:
  Eigen::MatrixXd w_;
};

// Clamps [-tol, 0) to 0 and checks nonnegativity and unit sum.
void validate_mass(Eigen::Ref<Eigen::VectorXd> mass, const char* what);

// -sum p log2 p over an arbitrary dense expression; zero entries contribute 0.
template <typename Derived>
double entropy_bits(const Eigen::DenseBase<Derived>& p) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double v = p.derived().coeff(i);
    if (v > 0.0) h -= v * std::log2(v);
  }
  return h > 0.0 ? h : 0.0;
}

double entropy(const Pmf& p);
double entropy(const JointPmf& p);
double binary_entropy(double a);

// I(X;Y) of a rank-2 joint.
double mutual_information(const JointPmf& xy);
// I(A;B) between component groups of any joint.
double mutual_information(const JointPmf& j, const std::vector<int>& a,
                          const std::vector<int>& b);
// sum_z P(z) I(X;Y|Z=z) for a rank-3 joint, conditioning on component `cond`.
double conditional_mutual_information(const JointPmf& xyz, int cond);
// I(A;B|C) between component groups, via entropies of marginals.
double conditional_mutual_information(const JointPmf& j, const std::vector<int>& a,
                                      const std::vector<int>& b,
                                      const std::vector<int>& c);
// H(A|B) between component groups.
double conditional_entropy(const JointPmf& j, const std::vector<int>& a,
                           const std::vector<int>& b);

// sum |p - q|, the full l1 distance.
double variational_distance(const Pmf& p, const Pmf& q);
double variational_distance(const JointPmf& p, const JointPmf& q);

// Joint over the listed components, in the listed order.
JointPmf marginalize(const JointPmf& j, const std::vector<int>& keep);
Pmf marginal(const JointPmf& j, int component);

// P(y|x) from a rank-2 joint; rows with zero input mass become uniform.
Channel conditional(const JointPmf& xy);
// Joint P(x) W(y|x).
JointPmf compose(const Pmf& px, const Channel& w);
// Row-wise product channel (W1 x W2)((y1,y2)|(x1,x2)), row-major pairs.
Channel kronecker(const Channel& a, const Channel& b);

}  // namespace skg
