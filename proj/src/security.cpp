#include "skg/security.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <unordered_map>

#include "skg/rng.hpp"

namespace skg {

namespace {

struct VKey {
  std::int32_t cls = 0;
  std::uint64_t i = 0, p = 0, z = 0;
  std::uint8_t t = 0;
  bool operator==(const VKey& o) const {
    return cls == o.cls && i == o.i && p == o.p && z == o.z && t == o.t;
  }
};

struct VKeyHash {
  std::size_t operator()(const VKey& k) const {
    std::uint64_t s = k.z * 0x9E3779B97F4A7C15ULL ^ (k.i << 20) ^ (k.p << 40) ^
                      (static_cast<std::uint64_t>(k.cls) << 8) ^ k.t;
    return static_cast<std::size_t>(splitmix64(s));
  }
};

// Joint mass of (V, K) accumulated as V -> per-key weights.
class ConditionalAccumulator {
 public:
  explicit ConditionalAccumulator(int k) : k_(k) {}
  void add(const VKey& v, int key, double w) {
    auto& row = cells_[v];
    if (row.empty()) row.assign(k_, 0.0);
    row[key - 1] += w;
    total_ += w;
  }
  // H(K|V) in bits, normalising by the accumulated total.
  double conditional_entropy() const {
    double h = 0.0;
    for (const auto& [v, row] : cells_) {
      double pv = 0.0;
      for (double m : row) pv += m;
      for (double m : row)
        if (m > 0.0) h += m * std::log2(pv / m);
    }
    return std::max(0.0, h / total_);
  }
  // (nonempty (K,V) cells - nonempty V cells) / (2 N ln 2).
  double miller_madow(double samples) const {
    long kv = 0;
    for (const auto& [v, row] : cells_)
      for (double m : row)
        if (m > 0.0) ++kv;
    return static_cast<double>(kv - static_cast<long>(cells_.size())) /
           (2.0 * samples * std::log(2.0));
  }

 private:
  int k_;
  double total_ = 0.0;
  std::unordered_map<VKey, std::vector<double>, VKeyHash> cells_;
};

std::uint64_t checked_pow(std::uint64_t base, int n, std::uint64_t cap, bool& over) {
  std::uint64_t v = 1;
  over = false;
  for (int t = 0; t < n; ++t) {
    if (v > cap / base) {
      over = true;
      return cap;
    }
    v *= base;
  }
  return v;
}

void index_to_sequence(std::uint64_t idx, int alphabet, Sequence& out) {
  for (auto& s : out) {
    s = static_cast<Symbol>(idx % alphabet);
    idx /= alphabet;
  }
}

std::uint64_t sequence_to_index(SeqView s, int alphabet) {
  std::uint64_t idx = 0;
  for (std::size_t t = s.size(); t-- > 0;) idx = idx * alphabet + s[t];
  return idx;
}

double block_prob(const Eigen::MatrixXd& pxz, SeqView x, SeqView z) {
  double p = 1.0;
  for (std::size_t t = 0; t < x.size(); ++t) p *= pxz(x[t], z[t]);
  return p;
}

// Typical-event test for state s under the auxiliary channels of class c.
class TypicalEvent {
 public:
  TypicalEvent(const ProtocolInstance& inst, int state) : inst_(inst) {
    const auto& src = inst.source();
    for (std::size_t c = 0; c < inst.classes().size(); ++c) {
      const JointPmf j5 = aux_joint(src.joint(state), inst.setup(static_cast<int>(c)).model.aux);
      if (inst.config().layer == Layer::kA)
        joints_.push_back(marginalize(j5, {kAuxU, kAuxX, kAuxZ}));
      else
        joints_.push_back(marginalize(j5, {kAuxU, kAuxV, kAuxX, kAuxZ}));
    }
  }

  bool operator()(const AliceOutput& a, SeqView x, SeqView z) const {
    if (!a.estimated || !a.enc.ok()) return false;
    const ClassSetup& s = inst_.setup(a.cls);
    const Sequence u = s.cu.sequence(a.enc.i, a.enc.j);
    const double sigma = inst_.config().typicality.sigma;
    if (inst_.config().layer == Layer::kA) {
      const SeqView seqs[3] = {u, x, z};
      return is_jointly_typical(seqs, joints_[a.cls], sigma);
    }
    if (a.enc.p == 0) return false;
    const Sequence v = s.cv->sequence(a.enc.i, a.enc.j, a.enc.p, a.enc.q);
    const SeqView seqs[4] = {u, v, x, z};
    return is_jointly_typical(seqs, joints_[a.cls], sigma);
  }

 private:
  const ProtocolInstance& inst_;
  std::vector<JointPmf> joints_;
};

}  // namespace

SecurityAssessment assess_security(const ProtocolInstance& inst, const SecurityOptions& opt) {
  const CompoundSource& src = inst.source();
  const int n = inst.config().n;
  const int k = inst.key_size();
  SecurityAssessment out;
  out.mode = opt.mode;
  out.key_size = k;

  bool over_x = false, over_z = false;
  const std::uint64_t nx = checked_pow(src.x_size(), n, ~std::uint64_t{0} >> 1, over_x);
  const std::uint64_t nz = checked_pow(src.z_size(), n, ~std::uint64_t{0} >> 1, over_z);
  if (opt.mode == SecurityMode::kExact) {
    const bool over = over_x || over_z || nx > opt.exact_budget / nz;
    if (over) {
      std::ostringstream os;
      os << "exact security needs |X|^n |Z|^n = " << src.x_size() << "^" << n << " * "
         << src.z_size() << "^" << n << " block pairs, above the budget of " << opt.exact_budget;
      throw BudgetError(os.str());
    }
  }
  const bool z_verbatim = !over_z && nz <= opt.z_buckets;
  out.z_hashed = !z_verbatim;

  for (int s = 0; s < src.num_states(); ++s) {
    const Eigen::MatrixXd pxz = src.xz(s).matrix();
    const TypicalEvent in_t(inst, s);
    ConditionalAccumulator full(k), pub(k);
    StateSecurity st;
    st.state = s;
    auto record = [&](const AliceOutput& a, SeqView x, SeqView z, double w) {
      VKey v;
      v.cls = a.cls;
      v.i = a.enc.i;
      v.p = a.enc.p;
      if (z_verbatim) {
        v.z = sequence_to_index(z, src.z_size());
      } else {
        std::uint64_t h = 0x51ED270B27E3A1F1ULL;
        for (Symbol c : z) {
          h ^= c;
          h = splitmix64(h);
        }
        v.z = h % opt.z_buckets;
      }
      pub.add(v, a.extracted, w);
      v.t = in_t(a, x, z) ? 1 : 0;
      full.add(v, a.extracted, w);
    };

    if (opt.mode == SecurityMode::kExact) {
      Sequence x(n), z(n);
      for (std::uint64_t xi = 0; xi < nx; ++xi) {
        index_to_sequence(xi, src.x_size(), x);
        double px = 1.0;
        for (Symbol c : x) px *= pxz.row(c).sum();
        if (px <= 0.0) continue;
        const AliceOutput a = inst.alice(x);
        if (!a.estimated) throw SpecError("exact security: positive-mass block with no class");
        for (std::uint64_t zi = 0; zi < nz; ++zi) {
          index_to_sequence(zi, src.z_size(), z);
          const double p = block_prob(pxz, x, z);
          if (p > 0.0) record(a, x, z, p);
        }
      }
    } else {
      if (opt.plugin_samples < 1) throw DomainError("plug-in security needs samples");
      std::unordered_map<std::uint64_t, AliceOutput> cache;
      const bool cache_x = !over_x && nx <= (std::uint64_t{1} << 22);
      for (long t = 0; t < opt.plugin_samples; ++t) {
        const SampleBlock b =
            sample_block(src, s, n, derive_seed(opt.plugin_seed, static_cast<std::uint64_t>(t),
                                                StreamTag::kSource));
        AliceOutput a;
        if (cache_x) {
          const std::uint64_t key = sequence_to_index(b.x, src.x_size());
          auto it = cache.find(key);
          if (it == cache.end()) it = cache.emplace(key, inst.alice(b.x)).first;
          a = it->second;
        } else {
          a = inst.alice(b.x);
        }
        if (!a.estimated) continue;
        record(a, b.x, b.z, 1.0);
        ++st.samples;
      }
      st.bias_full = full.miller_madow(static_cast<double>(st.samples));
      st.bias_public = pub.miller_madow(static_cast<double>(st.samples));
    }
    st.entropy_full = full.conditional_entropy();
    st.entropy_public = pub.conditional_entropy();
    st.index_full = std::log2(static_cast<double>(k)) - st.entropy_full;
    st.index_public = std::log2(static_cast<double>(k)) - st.entropy_public;
    out.max_index_full = s == 0 ? st.index_full : std::max(out.max_index_full, st.index_full);
    out.max_index_public =
        s == 0 ? st.index_public : std::max(out.max_index_public, st.index_public);
    out.states.push_back(st);
  }
  return out;
}

GoodSetFamily build_good_sets(const ProtocolInstance& inst, int cls, double tau,
                              std::uint64_t exact_budget) {
  if (inst.config().layer != Layer::kA)
    throw SpecError("good-set construction is defined for the single-layer code");
  if (cls < 0 || cls >= static_cast<int>(inst.classes().size()))
    throw SpecError("build_good_sets: class out of range");
  if (!(tau > 0.0)) throw DomainError("build_good_sets: tau must be positive");
  const CompoundSource& src = inst.source();
  const int n = inst.config().n;
  const double delta = inst.config().delta;
  const TypicalityParams& tp = inst.config().typicality;
  const ClassSetup& setup = inst.setup(cls);
  const MarginalClass& mc = inst.classes()[cls];

  bool over_x = false, over_z = false;
  const std::uint64_t nx = checked_pow(src.x_size(), n, ~std::uint64_t{0} >> 1, over_x);
  const std::uint64_t nz = checked_pow(src.z_size(), n, ~std::uint64_t{0} >> 1, over_z);
  if (over_x || over_z || nx > exact_budget / nz)
    throw BudgetError("good-set construction needs exact enumeration of (X^n, Z^n)");

  GoodSetFamily g;
  g.class_index = cls;
  g.tau = tau;
  g.alpha = std::exp2(-n * (delta + 5.0 * tau));
  g.eta = std::exp2(-n * delta);
  g.guards_ok = g.alpha <= 1.0 / 6.0 && g.eta <= 1.0 / 3.0 && g.alpha <= g.eta;
  if (!g.guards_ok) g.failures.push_back("parameter guards alpha <= 1/6, eta <= 1/3, alpha <= eta");
  g.prob_class = 1.0;

  // Alice's outputs depend only on x^n.
  std::vector<AliceOutput> alice(nx);
  Sequence x(n), z(n);
  for (std::uint64_t xi = 0; xi < nx; ++xi) {
    index_to_sequence(xi, src.x_size(), x);
    alice[xi] = inst.alice(x);
  }

  const double ln2 = std::log(2.0);
  bool first_min = true;
  for (std::size_t m = 0; m < mc.members.size(); ++m) {
    const int s = mc.members[m];
    const JointPmf& j5 = setup.model.per_state[m];
    const JointPmf p_uxz = marginalize(j5, {kAuxU, kAuxX, kAuxZ});
    const Pmf pz = marginal(j5, kAuxZ);
    const Eigen::MatrixXd pxz = src.xz(s).matrix();
    GoodSetState gs;
    gs.state = s;

    // |B_s| and |B_{s,d}| for d = (i, z, 1).
    std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> b_sd;
    for (std::uint64_t zi = 0; zi < nz; ++zi) {
      index_to_sequence(zi, src.z_size(), z);
      if (!is_typical(z, pz, tp.xi)) continue;
      for (std::uint64_t i = 1; i <= setup.cu.n1; ++i)
        for (std::uint64_t j = 1; j <= setup.cu.n2; ++j) {
          const Sequence u = setup.cu.sequence(i, j);
          const SeqView fixed[2] = {u, z};
          if (joint_section_nonempty(p_uxz, 1, fixed, tp.sigma)) {
            ++gs.size_b;
            ++b_sd[{i, zi}];
          }
        }
    }
    gs.size_d_s = b_sd.size();
    for (const auto& [d, c] : b_sd)
      gs.min_b_sd = gs.min_b_sd == 0 ? c : std::min(gs.min_b_sd, c);

    // P(c, d | estimate == cls) restricted to B_s.
    double p_class = 0.0;
    std::map<std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>, double> pair_mass;
    for (std::uint64_t xi = 0; xi < nx; ++xi) {
      const AliceOutput& a = alice[xi];
      if (!a.estimated || a.cls != cls) continue;
      index_to_sequence(xi, src.x_size(), x);
      double px = 1.0;
      for (Symbol c : x) px *= pxz.row(c).sum();
      if (px <= 0.0) continue;
      p_class += px;
      if (!a.enc.ok()) continue;
      const Sequence u = setup.cu.sequence(a.enc.i, a.enc.j);
      for (std::uint64_t zi = 0; zi < nz; ++zi) {
        index_to_sequence(zi, src.z_size(), z);
        const double p = block_prob(pxz, x, z);
        if (p <= 0.0) continue;
        const SeqView seqs[3] = {u, x, z};
        if (!is_jointly_typical(seqs, p_uxz, tp.sigma)) continue;
        if (!is_typical(z, pz, tp.xi)) continue;
        pair_mass[{a.enc.j, a.enc.i, zi}] += p;
      }
    }
    g.prob_class = std::min(g.prob_class, p_class);
    if (p_class > 0.0) {
      for (const auto& [key, w] : pair_mass) {
        gs.prob_b += w / p_class;
        gs.max_pair_prob = std::max(gs.max_pair_prob, w / p_class);
      }
    }
    gs.pair_mass_ok = gs.size_b > 0 &&
                      gs.max_pair_prob < 1.0 / (g.alpha * static_cast<double>(gs.size_b));
    gs.coverage_ok = gs.prob_b >= 1.0 - (g.eta * g.eta - g.alpha * g.alpha);
    if (!gs.pair_mass_ok)
      g.failures.push_back("state " + src.label(s) + ": pair mass not below 1/(alpha |B_s|)");
    if (!gs.coverage_ok)
      g.failures.push_back("state " + src.label(s) + ": P(B_s) below 1 - (eta^2 - alpha^2)");
    if (gs.min_b_sd > 0) {
      g.min_b_sd = first_min ? gs.min_b_sd : std::min(g.min_b_sd, gs.min_b_sd);
      first_min = false;
    }
    g.states.push_back(gs);
  }

  g.log2_d_alphabet = std::log2(static_cast<double>(setup.cu.n1 + 1)) +
                      n * std::log2(static_cast<double>(src.z_size())) + 1.0;
  const double log2_min_b = g.min_b_sd > 0 ? std::log2(static_cast<double>(g.min_b_sd))
                                           : -std::numeric_limits<double>::infinity();
  g.log2_k_limit_mass = 6.0 * std::log2(g.alpha) + log2_min_b;
  g.log2_k_limit_size = (1.0 / g.alpha) / ln2 - 1.0 - g.log2_d_alphabet -
                        std::log2(static_cast<double>(mc.members.size()));
  g.lambda = g.alpha * g.alpha * g.alpha * static_cast<double>(g.min_b_sd);
  const double limit = std::min(g.log2_k_limit_mass, g.log2_k_limit_size);
  g.max_key_bits = std::isfinite(limit) ? static_cast<int>(std::ceil(limit)) - 1 : -1;
  if (g.max_key_bits < 0) g.max_key_bits = -1;
  g.key_size_ok = std::log2(static_cast<double>(inst.key_size())) < limit;
  if (!g.key_size_ok) g.failures.push_back("key size not below the good-set limits");
  if (g.alpha + g.eta <= 1.0)
    g.security_bound = good_set_security_bound(g.alpha, g.eta, inst.key_size());
  else
    g.security_bound = std::numeric_limits<double>::infinity();
  return g;
}

}  // namespace skg
