#include "skg/compound_source.hpp"

#include <algorithm>
#include <sstream>

#include "skg/linprog.hpp"
#include "skg/rng.hpp"

namespace skg {

CompoundSource::CompoundSource(Alphabet x, Alphabet y, Alphabet z,
                               std::vector<std::string> labels, std::vector<JointPmf> joints)
    : x_(x), y_(y), z_(z), labels_(std::move(labels)), joints_(std::move(joints)) {
  if (joints_.empty()) throw SpecError("compound source needs at least one state");
  if (labels_.size() != joints_.size()) throw SpecError("one label per state required");
  const std::vector<int> dims{x_.size, y_.size, z_.size};
  for (std::size_t s = 0; s < joints_.size(); ++s) {
    if (joints_[s].dims() != dims)
      throw SpecError("state '" + labels_[s] + "': joint dims do not match the alphabets");
    for (std::size_t t = 0; t < s; ++t)
      if (labels_[t] == labels_[s]) throw SpecError("duplicate state label '" + labels_[s] + "'");
  }
}

int CompoundSource::state_index(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw SpecError("unknown state label '" + label + "'");
  return static_cast<int>(it - labels_.begin());
}

std::vector<MarginalClass> marginal_partition(const CompoundSource& src) {
  std::vector<MarginalClass> classes;
  for (int s = 0; s < src.num_states(); ++s) {
    const Pmf px = src.x_marginal(s);
    bool placed = false;
    for (auto& c : classes) {
      if ((c.x_marginal.mass() - px.mass()).cwiseAbs().maxCoeff() <= kMarginalTolerance) {
        c.members.push_back(s);
        placed = true;
        break;
      }
    }
    if (!placed) {
      MarginalClass c;
      c.index = static_cast<int>(classes.size());
      c.x_marginal = px;
      c.members.push_back(s);
      classes.push_back(std::move(c));
    }
  }
  return classes;
}

SampleBlock sample_block(const CompoundSource& src, int state, int n, std::uint64_t seed) {
  if (state < 0 || state >= src.num_states()) throw SpecError("sample_block: state out of range");
  if (n < 1) throw DomainError("sample_block: n must be positive");
  const JointPmf& j = src.joint(state);
  CategoricalSampler draw(j.mass());
  Rng rng(seed);
  SampleBlock b;
  b.n = n;
  b.true_state = state;
  b.x.resize(n);
  b.y.resize(n);
  b.z.resize(n);
  const int yz = src.y_size() * src.z_size();
  for (int t = 0; t < n; ++t) {
    const int f = draw(rng);
    b.x[t] = static_cast<Symbol>(f / yz);
    b.y[t] = static_cast<Symbol>((f / src.z_size()) % src.y_size());
    b.z[t] = static_cast<Symbol>(f % src.z_size());
  }
  return b;
}

SampleBlock sample_block(const CompoundSource& src, const std::string& label, int n,
                         std::uint64_t seed) {
  return sample_block(src, src.state_index(label), n, seed);
}

namespace {

int checked_power(int base, int n, int cap, const char* what) {
  long v = 1;
  for (int i = 0; i < n; ++i) {
    v *= base;
    if (v > cap) {
      std::ostringstream os;
      os << what << " alphabet " << base << "^" << n << " exceeds cap " << cap;
      throw BudgetError(os.str());
    }
  }
  return static_cast<int>(v);
}

}  // namespace

CompoundSource product_source(const CompoundSource& src, int n, int max_alphabet) {
  if (n < 1) throw DomainError("product_source: n must be positive");
  const int ax = checked_power(src.x_size(), n, max_alphabet, "X");
  const int ay = checked_power(src.y_size(), n, max_alphabet, "Y");
  const int az = checked_power(src.z_size(), n, max_alphabet, "Z");
  std::vector<JointPmf> joints;
  for (int s = 0; s < src.num_states(); ++s) {
    const JointPmf& j = src.joint(s);
    Eigen::VectorXd m(static_cast<Eigen::Index>(ax) * ay * az);
    for (int bx = 0; bx < ax; ++bx)
      for (int by = 0; by < ay; ++by)
        for (int bz = 0; bz < az; ++bz) {
          double p = 1.0;
          int rx = bx, ry = by, rz = bz;
          for (int k = 0; k < n; ++k) {
            p *= j(rx % src.x_size(), ry % src.y_size(), rz % src.z_size());
            rx /= src.x_size();
            ry /= src.y_size();
            rz /= src.z_size();
          }
          m((static_cast<Eigen::Index>(bx) * ay + by) * az + bz) = p;
        }
    m /= m.sum();
    joints.emplace_back(std::vector<int>{ax, ay, az}, std::move(m));
  }
  return CompoundSource(Alphabet(ax), Alphabet(ay), Alphabet(az), src.labels(), std::move(joints));
}

DegradednessReport check_degraded(const CompoundSource& src, double tol) {
  const int nx = src.x_size(), ny = src.y_size(), nz = src.z_size();
  DegradednessReport rep;
  rep.degraded = true;
  for (const auto& cls : marginal_partition(src)) {
    for (int r : cls.members) {
      const Eigen::MatrixXd pxy = src.xy(r).matrix();
      for (int t : cls.members) {
        const Eigen::MatrixXd pxz = src.xz(t).matrix();
        // Unknowns D(z|y) at column y*nz + z.
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(nx * nz + ny, ny * nz);
        Eigen::VectorXd b(nx * nz + ny);
        for (int x = 0; x < nx; ++x)
          for (int z = 0; z < nz; ++z) {
            for (int y = 0; y < ny; ++y) a(x * nz + z, y * nz + z) = pxy(x, y);
            b(x * nz + z) = pxz(x, z);
          }
        for (int y = 0; y < ny; ++y) {
          for (int z = 0; z < nz; ++z) a(nx * nz + y, y * nz + z) = 1.0;
          b(nx * nz + y) = 1.0;
        }
        const FeasibilityResult fr = find_feasible_point(a, b, tol);
        DegradedPair p;
        p.class_index = cls.index;
        p.r = r;
        p.t = t;
        p.residual = fr.infeasibility;
        p.feasible = fr.feasible;
        if (fr.feasible) {
          Eigen::MatrixXd d(ny, nz);
          for (int y = 0; y < ny; ++y) {
            for (int z = 0; z < nz; ++z) d(y, z) = fr.x(y * nz + z);
            d.row(y) /= d.row(y).sum();
          }
          p.witness = Channel(std::move(d));
        }
        rep.degraded = rep.degraded && p.feasible;
        rep.pairs.push_back(std::move(p));
      }
    }
  }
  return rep;
}

}  // namespace skg
