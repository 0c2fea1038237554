#include "skg/typicality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace skg {

namespace {

constexpr double kCountTol = 1e-9;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

void check_eps(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("typicality slack must be positive");
}

}  // namespace

void TypicalityParams::validate() const {
  if (!(xi > 0.0 && xi < zeta && zeta < sigma && sigma < vartheta)) {
    std::ostringstream os;
    os << "typicality slacks must satisfy 0 < xi < zeta < sigma < vartheta, got (" << xi << ", "
       << zeta << ", " << sigma << ", " << vartheta << ")";
    throw SpecError(os.str());
  }
}

TypicalityParams TypicalityParams::scaled_defaults(double min_positive_mass) {
  const double m = min_positive_mass;
  return {0.05 * m, 0.10 * m, 0.15 * m, 0.20 * m};
}

CountWindow make_count_window(const Eigen::VectorXd& mass, int n, double eps) {
  check_eps(eps);
  CountWindow w;
  w.lo.resize(mass.size());
  w.hi.resize(mass.size());
  for (Eigen::Index i = 0; i < mass.size(); ++i) {
    const double center = n * mass(i);
    const double r = n * eps + kCountTol;
    w.lo[i] = std::max(0, static_cast<int>(std::ceil(center - r)));
    w.hi[i] = mass(i) > 0.0 ? std::min(n, static_cast<int>(std::floor(center + r))) : 0;
  }
  return w;
}

Eigen::VectorXi type_counts(SeqView seq, int alphabet) {
  Eigen::VectorXi c = Eigen::VectorXi::Zero(alphabet);
  for (Symbol s : seq) {
    if (s >= alphabet) throw SpecError("sequence symbol outside alphabet");
    ++c(s);
  }
  return c;
}

Eigen::VectorXi joint_counts(std::span<const SeqView> seqs, const std::vector<int>& dims) {
  if (seqs.size() != dims.size() || seqs.empty())
    throw SpecError("joint_counts: sequence count does not match dims");
  const std::size_t n = seqs[0].size();
  Eigen::Index total = 1;
  for (int d : dims) total *= d;
  Eigen::VectorXi c = Eigen::VectorXi::Zero(total);
  for (const auto& s : seqs)
    if (s.size() != n) throw SpecError("joint_counts: sequence lengths differ");
  for (std::size_t t = 0; t < n; ++t) {
    Eigen::Index f = 0;
    for (std::size_t k = 0; k < seqs.size(); ++k) {
      const int s = seqs[k][t];
      if (s >= dims[k]) throw SpecError("sequence symbol outside alphabet");
      f = f * dims[k] + s;
    }
    ++c(f);
  }
  return c;
}

namespace {

bool counts_in_window(const Eigen::VectorXi& counts, const CountWindow& w) {
  for (Eigen::Index i = 0; i < counts.size(); ++i)
    if (!w.admits(i, counts(i))) return false;
  return true;
}

}  // namespace

bool is_typical(SeqView seq, const Pmf& p, double eps) {
  const int n = static_cast<int>(seq.size());
  return counts_in_window(type_counts(seq, p.size()), make_count_window(p.mass(), n, eps));
}

bool is_jointly_typical(SeqView x, SeqView y, const JointPmf& pxy, double eps) {
  const SeqView both[2] = {x, y};
  return is_jointly_typical(both, pxy, eps);
}

bool is_jointly_typical(std::span<const SeqView> seqs, const JointPmf& joint, double eps) {
  if (static_cast<int>(seqs.size()) != joint.rank())
    throw SpecError("is_jointly_typical: wrong number of sequences");
  const int n = static_cast<int>(seqs[0].size());
  return counts_in_window(joint_counts(seqs, joint.dims()),
                          make_count_window(joint.mass(), n, eps));
}

ConditionalTypicalSet::ConditionalTypicalSet(Sequence x, Channel w, double eps)
    : x_(std::move(x)), w_(std::move(w)), eps_(eps) {
  check_eps(eps);
  nx_ = type_counts(x_, w_.inputs());
}

bool ConditionalTypicalSet::contains(SeqView y) const {
  if (y.size() != x_.size()) throw SpecError("ConditionalTypicalSet: length mismatch");
  const SeqView both[2] = {SeqView(x_), y};
  const Eigen::VectorXi nxy = joint_counts(both, {w_.inputs(), w_.outputs()});
  const double n = static_cast<double>(x_.size());
  for (int a = 0; a < w_.inputs(); ++a)
    for (int b = 0; b < w_.outputs(); ++b) {
      const int c = nxy(a * w_.outputs() + b);
      if (w_(a, b) == 0.0) {
        if (c != 0) return false;
        continue;
      }
      if (std::abs(nx_(a) * w_(a, b) - c) > n * eps_ + kCountTol) return false;
    }
  return true;
}

ConditionalTypicalSet conditional_typical_set(SeqView x, const Channel& w, double eps) {
  return ConditionalTypicalSet(Sequence(x.begin(), x.end()), w, eps);
}

namespace {

// Per fixed-cell (lo, hi) window lists for the free component, plus counts.
struct Section {
  Eigen::VectorXi fixed_counts;
  CountWindow window;  // over the full joint
  std::vector<Eigen::Index> stride_cells;  // joint cell for (fixed cell, free symbol)
  int free_dim = 0;
};

Section make_section(const JointPmf& joint, int free_component, std::span<const SeqView> fixed,
                     double eps) {
  if (free_component < 0 || free_component >= joint.rank())
    throw SpecError("joint section: free component out of range");
  if (static_cast<int>(fixed.size()) != joint.rank() - 1)
    throw SpecError("joint section: wrong number of fixed sequences");
  std::vector<int> fixed_dims;
  for (int c = 0; c < joint.rank(); ++c)
    if (c != free_component) fixed_dims.push_back(joint.dim(c));
  Section s;
  s.free_dim = joint.dim(free_component);
  if (fixed.empty()) throw SpecError("joint section: needs at least one fixed sequence");
  const int n = static_cast<int>(fixed[0].size());
  s.fixed_counts = joint_counts(fixed, fixed_dims);
  s.window = make_count_window(joint.mass(), n, eps);
  std::vector<int> fidx(fixed_dims.size());
  std::vector<int> jidx(joint.rank());
  s.stride_cells.resize(s.fixed_counts.size() * s.free_dim);
  for (Eigen::Index fc = 0; fc < s.fixed_counts.size(); ++fc) {
    Eigen::Index rem = fc;
    for (int k = static_cast<int>(fixed_dims.size()) - 1; k >= 0; --k) {
      fidx[k] = static_cast<int>(rem % fixed_dims[k]);
      rem /= fixed_dims[k];
    }
    for (int v = 0; v < s.free_dim; ++v) {
      int k = 0;
      for (int c = 0; c < joint.rank(); ++c) jidx[c] = (c == free_component) ? v : fidx[k++];
      s.stride_cells[fc * s.free_dim + v] = joint.flat_index(jidx);
    }
  }
  return s;
}

}  // namespace

bool joint_section_nonempty(const JointPmf& joint, int free_component,
                            std::span<const SeqView> fixed, double eps) {
  const Section s = make_section(joint, free_component, fixed, eps);
  for (Eigen::Index fc = 0; fc < s.fixed_counts.size(); ++fc) {
    long lo = 0, hi = 0;
    for (int v = 0; v < s.free_dim; ++v) {
      const Eigen::Index cell = s.stride_cells[fc * s.free_dim + v];
      if (s.window.lo[cell] > s.window.hi[cell]) return false;
      lo += s.window.lo[cell];
      hi += s.window.hi[cell];
    }
    const long c = s.fixed_counts(fc);
    if (c < lo || c > hi) return false;
  }
  return true;
}

double joint_section_log2_size(const JointPmf& joint, int free_component,
                               std::span<const SeqView> fixed, double eps) {
  const Section s = make_section(joint, free_component, fixed, eps);
  std::vector<int> lo(s.free_dim), hi(s.free_dim);
  const std::vector<double> zero(s.free_dim, 0.0);
  double total = 0.0;
  for (Eigen::Index fc = 0; fc < s.fixed_counts.size(); ++fc) {
    for (int v = 0; v < s.free_dim; ++v) {
      const Eigen::Index cell = s.stride_cells[fc * s.free_dim + v];
      lo[v] = s.window.lo[cell];
      hi[v] = s.window.hi[cell];
    }
    const double part = log2_weighted_compositions(s.fixed_counts(fc), lo, hi, zero);
    if (part == kNegInf) return kNegInf;
    total += part;
  }
  return total;
}

double log2_weighted_compositions(int total, std::span<const int> lo, std::span<const int> hi,
                                  std::span<const double> log_weight) {
  // dp[t]: natural-log mass of partial compositions summing to t, weighted by
  // prod exp(c*w)/c!. Multiply by total! at the end.
  std::vector<double> lg(total + 1);
  for (int c = 0; c <= total; ++c) lg[c] = std::lgamma(static_cast<double>(c) + 1.0);
  std::vector<double> dp(total + 1, kNegInf), next(total + 1);
  dp[0] = 0.0;
  for (std::size_t f = 0; f < lo.size(); ++f) {
    std::fill(next.begin(), next.end(), kNegInf);
    const int a = std::max(0, lo[f]);
    const int b = std::min(total, hi[f]);
    for (int t = 0; t <= total; ++t) {
      if (dp[t] == kNegInf) continue;
      for (int c = a; c <= b && t + c <= total; ++c) {
        const double term = dp[t] + (c == 0 ? 0.0 : c * log_weight[f]) - lg[c];
        next[t + c] = log_add(next[t + c], term);
      }
    }
    dp.swap(next);
  }
  if (dp[total] == kNegInf) return kNegInf;
  return (dp[total] + lg[total]) / std::log(2.0);
}

TypicalProbability typical_probability(const Pmf& p, int n, double xi) {
  if (n < 1) throw DomainError("typical_probability: n must be positive");
  const CountWindow w = make_count_window(p.mass(), n, xi);
  std::vector<double> logw(p.size());
  for (int i = 0; i < p.size(); ++i)
    logw[i] = p(i) > 0.0 ? std::log(p(i)) : kNegInf;
  const double l2 = log2_weighted_compositions(n, w.lo, w.hi, logw);
  TypicalProbability r;
  r.exact = l2 == kNegInf ? 0.0 : std::min(1.0, std::exp2(l2));
  r.bound = 1.0 - 2.0 * p.size() * std::exp(-2.0 * xi * xi * n);
  return r;
}

TypicalSetSize typical_set_size_bounds(const Pmf& p, int n, double eps, double tau) {
  if (n < 1) throw DomainError("typical_set_size_bounds: n must be positive");
  const CountWindow w = make_count_window(p.mass(), n, eps);
  const std::vector<double> zero(p.size(), 0.0);
  TypicalSetSize r;
  r.log2_size = log2_weighted_compositions(n, w.lo, w.hi, zero);
  r.entropy = entropy(p);
  r.tau = tau;
  r.within = std::abs(r.log2_size / n - r.entropy) <= tau;
  return r;
}

}  // namespace skg
