#include "skg/prob.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace skg {

Alphabet::Alphabet(int n) : size(n) {
  if (n < 1) throw SpecError("alphabet size must be positive");
}

void validate_mass(Eigen::Ref<Eigen::VectorXd> mass, const char* what) {
  if (mass.size() == 0) throw SpecError(std::string(what) + ": empty mass vector");
  for (Eigen::Index i = 0; i < mass.size(); ++i) {
    double& v = mass(i);
    if (!std::isfinite(v)) throw SpecError(std::string(what) + ": non-finite mass");
    if (v < -kProbTolerance) {
      std::ostringstream os;
      os << what << ": negative mass " << v << " at index " << i;
      throw SpecError(os.str());
    }
    if (v < 0.0) v = 0.0;
  }
  const double s = mass.sum();
  if (std::abs(s - 1.0) > kProbTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << what << ": masses sum to " << s << ", not 1";
    throw SpecError(os.str());
  }
}

namespace {

double min_positive_of(const Eigen::VectorXd& m) {
  double best = 1.0;
  for (Eigen::Index i = 0; i < m.size(); ++i)
    if (m(i) > 0.0) best = std::min(best, m(i));
  return best;
}

}  // namespace

Pmf::Pmf(Eigen::VectorXd mass) : mass_(std::move(mass)) { validate_mass(mass_, "Pmf"); }

Pmf Pmf::uniform(int size) {
  Alphabet a(size);
  return Pmf(Eigen::VectorXd::Constant(a.size, 1.0 / a.size));
}

Pmf Pmf::point(int size, int symbol) {
  Alphabet a(size);
  if (symbol < 0 || symbol >= size) throw SpecError("Pmf::point: symbol out of range");
  Eigen::VectorXd m = Eigen::VectorXd::Zero(size);
  m(symbol) = 1.0;
  return Pmf(std::move(m));
}

double Pmf::min_positive() const { return min_positive_of(mass_); }

JointPmf::JointPmf(std::vector<int> dims, Eigen::VectorXd mass)
    : dims_(std::move(dims)), mass_(std::move(mass)) {
  if (dims_.empty()) throw SpecError("JointPmf: no components");
  Eigen::Index total = 1;
  for (int d : dims_) {
    if (d < 1) throw SpecError("JointPmf: component alphabet size must be positive");
    total *= d;
  }
  if (total != mass_.size()) throw SpecError("JointPmf: mass size does not match dims");
  validate_mass(mass_, "JointPmf");
}

Eigen::Index JointPmf::flat_index(std::span<const int> idx) const {
  Eigen::Index f = 0;
  for (int c = 0; c < rank(); ++c) f = f * dims_[c] + idx[c];
  return f;
}

void JointPmf::unflatten(Eigen::Index flat, std::span<int> idx) const {
  for (int c = rank() - 1; c >= 0; --c) {
    idx[c] = static_cast<int>(flat % dims_[c]);
    flat /= dims_[c];
  }
}

double JointPmf::operator()(int a, int b) const { return mass_(a * dims_[1] + b); }

double JointPmf::operator()(int a, int b, int c) const {
  return mass_((a * dims_[1] + b) * dims_[2] + c);
}

Eigen::MatrixXd JointPmf::matrix() const {
  if (rank() != 2) throw SpecError("JointPmf::matrix: rank must be 2");
  Eigen::MatrixXd m(dims_[0], dims_[1]);
  for (int a = 0; a < dims_[0]; ++a)
    for (int b = 0; b < dims_[1]; ++b) m(a, b) = (*this)(a, b);
  return m;
}

double JointPmf::min_positive() const { return min_positive_of(mass_); }

Channel::Channel(Eigen::MatrixXd w) : w_(std::move(w)) {
  if (w_.rows() < 1 || w_.cols() < 1) throw SpecError("Channel: empty matrix");
  for (Eigen::Index r = 0; r < w_.rows(); ++r) {
    Eigen::VectorXd row = w_.row(r).transpose();
    validate_mass(row, "Channel row");
    w_.row(r) = row.transpose();
  }
}

Channel Channel::identity(int size) {
  return Channel(Eigen::MatrixXd::Identity(size, size));
}

Channel Channel::constant(int inputs, const Pmf& out) {
  Eigen::MatrixXd w(inputs, out.size());
  for (int r = 0; r < inputs; ++r) w.row(r) = out.mass().transpose();
  return Channel(std::move(w));
}

double entropy(const Pmf& p) { return entropy_bits(p.mass()); }
double entropy(const JointPmf& p) { return entropy_bits(p.mass()); }

double binary_entropy(double a) {
  if (!(a >= 0.0 && a <= 1.0)) throw DomainError("binary_entropy: argument outside [0,1]");
  Eigen::Vector2d p(a, 1.0 - a);
  return entropy_bits(p);
}

JointPmf marginalize(const JointPmf& j, const std::vector<int>& keep) {
  if (keep.empty()) throw SpecError("marginalize: nothing to keep");
  std::vector<int> dims;
  for (int c : keep) {
    if (c < 0 || c >= j.rank()) throw SpecError("marginalize: component out of range");
    dims.push_back(j.dim(c));
  }
  Eigen::Index total = 1;
  for (int d : dims) total *= d;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(total);
  std::vector<int> idx(j.rank());
  for (Eigen::Index f = 0; f < j.size(); ++f) {
    const double v = j.mass()(f);
    if (v == 0.0) continue;
    j.unflatten(f, idx);
    Eigen::Index g = 0;
    for (std::size_t k = 0; k < keep.size(); ++k) g = g * dims[k] + idx[keep[k]];
    out(g) += v;
  }
  // Renormalise away summation drift; validity was already checked on j.
  out /= out.sum();
  return JointPmf(std::move(dims), std::move(out));
}

Pmf marginal(const JointPmf& j, int component) {
  return Pmf(marginalize(j, {component}).mass());
}

namespace {

double group_entropy(const JointPmf& j, const std::vector<int>& g) {
  if (g.empty()) return 0.0;
  return entropy(marginalize(j, g));
}

std::vector<int> concat(std::vector<int> a, const std::vector<int>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

double mutual_information(const JointPmf& xy) {
  if (xy.rank() != 2) throw SpecError("mutual_information: rank must be 2");
  const Eigen::MatrixXd m = xy.matrix();
  const Eigen::VectorXd px = m.rowwise().sum();
  const Eigen::RowVectorXd py = m.colwise().sum();
  double i = 0.0;
  for (int a = 0; a < m.rows(); ++a)
    for (int b = 0; b < m.cols(); ++b)
      if (m(a, b) > 0.0) i += m(a, b) * std::log2(m(a, b) / (px(a) * py(b)));
  return std::max(0.0, i);
}

double mutual_information(const JointPmf& j, const std::vector<int>& a,
                          const std::vector<int>& b) {
  const double i = group_entropy(j, a) + group_entropy(j, b) - group_entropy(j, concat(a, b));
  return std::max(0.0, i);
}

double conditional_mutual_information(const JointPmf& xyz, int cond) {
  if (xyz.rank() != 3) throw SpecError("conditional_mutual_information: rank must be 3");
  if (cond < 0 || cond > 2) throw SpecError("conditional_mutual_information: bad component");
  std::vector<int> others;
  for (int c = 0; c < 3; ++c)
    if (c != cond) others.push_back(c);
  const int na = xyz.dim(others[0]);
  const int nb = xyz.dim(others[1]);
  double total = 0.0;
  int idx[3];
  for (int z = 0; z < xyz.dim(cond); ++z) {
    Eigen::MatrixXd slice(na, nb);
    for (int a = 0; a < na; ++a)
      for (int b = 0; b < nb; ++b) {
        idx[cond] = z;
        idx[others[0]] = a;
        idx[others[1]] = b;
        slice(a, b) = xyz.at(idx);
      }
    const double pz = slice.sum();
    if (pz <= 0.0) continue;
    const Eigen::VectorXd pa = slice.rowwise().sum();
    const Eigen::RowVectorXd pb = slice.colwise().sum();
    for (int a = 0; a < na; ++a)
      for (int b = 0; b < nb; ++b)
        if (slice(a, b) > 0.0)
          total += slice(a, b) * std::log2(slice(a, b) * pz / (pa(a) * pb(b)));
  }
  return std::max(0.0, total);
}

double conditional_mutual_information(const JointPmf& j, const std::vector<int>& a,
                                      const std::vector<int>& b,
                                      const std::vector<int>& c) {
  const double i = group_entropy(j, concat(a, c)) + group_entropy(j, concat(b, c)) -
                   group_entropy(j, concat(concat(a, b), c)) - group_entropy(j, c);
  return std::max(0.0, i);
}

double conditional_entropy(const JointPmf& j, const std::vector<int>& a,
                           const std::vector<int>& b) {
  return std::max(0.0, group_entropy(j, concat(a, b)) - group_entropy(j, b));
}

double variational_distance(const Pmf& p, const Pmf& q) {
  if (p.size() != q.size()) throw SpecError("variational_distance: size mismatch");
  return (p.mass() - q.mass()).cwiseAbs().sum();
}

double variational_distance(const JointPmf& p, const JointPmf& q) {
  if (p.dims() != q.dims()) throw SpecError("variational_distance: dims mismatch");
  return (p.mass() - q.mass()).cwiseAbs().sum();
}

Channel conditional(const JointPmf& xy) {
  Eigen::MatrixXd m = xy.matrix();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const double s = m.row(r).sum();
    if (s > 0.0)
      m.row(r) /= s;
    else
      m.row(r).setConstant(1.0 / static_cast<double>(m.cols()));
  }
  return Channel(std::move(m));
}

JointPmf compose(const Pmf& px, const Channel& w) {
  if (px.size() != w.inputs()) throw SpecError("compose: size mismatch");
  Eigen::VectorXd flat(px.size() * w.outputs());
  for (int x = 0; x < px.size(); ++x)
    for (int y = 0; y < w.outputs(); ++y) flat(x * w.outputs() + y) = px(x) * w(x, y);
  flat /= flat.sum();
  return JointPmf({px.size(), w.outputs()}, std::move(flat));
}

Channel kronecker(const Channel& a, const Channel& b) {
  Eigen::MatrixXd k(a.inputs() * b.inputs(), a.outputs() * b.outputs());
  for (int x1 = 0; x1 < a.inputs(); ++x1)
    for (int x2 = 0; x2 < b.inputs(); ++x2)
      for (int y1 = 0; y1 < a.outputs(); ++y1)
        for (int y2 = 0; y2 < b.outputs(); ++y2)
          k(x1 * b.inputs() + x2, y1 * b.outputs() + y2) = a(x1, y1) * b(x2, y2);
  return Channel(std::move(k));
}

}  // namespace skg
