#include "skg/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "skg/rng.hpp"

namespace skg {

DegradedCapacity degraded_capacity(const CompoundSource& src) {
  DegradedCapacity out;
  const auto classes = marginal_partition(src);
  double raw = std::numeric_limits<double>::infinity();
  for (const auto& c : classes) {
    double min_y = std::numeric_limits<double>::infinity();
    double max_z = 0.0;
    for (int s : c.members) {
      min_y = std::min(min_y, mutual_information(src.xy(s)));
      max_z = std::max(max_z, mutual_information(src.xz(s)));
    }
    out.per_class.push_back(min_y - max_z);
    raw = std::min(raw, min_y - max_z);
  }
  out.raw = raw;
  out.clamped = raw < 0.0;
  out.value = std::max(0.0, raw);
  out.degraded = check_degraded(src).degraded;
  if (!out.degraded) out.flags.push_back("formula outside the degraded hypothesis");
  if (out.clamped) out.flags.push_back("negative value clamped to 0");
  return out;
}

namespace {

double entropy_of(const Eigen::MatrixXd& m) { return entropy_bits(m.reshaped()); }

struct MemberChannels {
  Eigen::MatrixXd y_given_x;  // |X| x |Y|
  Eigen::MatrixXd z_given_x;  // |X| x |Z|
};

// Evaluates the information terms from raw channel matrices.
class TermEvaluator {
 public:
  TermEvaluator(const CompoundSource& src, const std::vector<int>& members) {
    px_ = src.x_marginal(members.front()).mass();
    for (int s : members)
      ch_.push_back({conditional(src.xy(s)).matrix(), conditional(src.xz(s)).matrix()});
  }

  int x_size() const { return static_cast<int>(px_.size()); }

  // w: |X| x |V| = P(v|x), q: |V| x |U| = P(u|v).
  AuxTerms operator()(const Eigen::MatrixXd& w, const Eigen::MatrixXd& q) const {
    const int nv = static_cast<int>(w.cols());
    const int nu = static_cast<int>(q.cols());
    const int nx = x_size();
    // m(u*V + v, x) = P(x) W(v|x) Q(u|v)
    Eigen::MatrixXd m(nu * nv, nx);
    for (int u = 0; u < nu; ++u)
      for (int v = 0; v < nv; ++v)
        for (int x = 0; x < nx; ++x) m(u * nv + v, x) = px_(x) * w(x, v) * q(v, u);
    Eigen::MatrixXd mux = Eigen::MatrixXd::Zero(nu, nx);
    for (int u = 0; u < nu; ++u) mux.row(u) = m.middleRows(u * nv, nv).colwise().sum();
    const Eigen::VectorXd puv = m.rowwise().sum();
    const Eigen::VectorXd pu = mux.rowwise().sum();
    const double h_u = entropy_bits(pu);
    const double h_uv = entropy_bits(puv);
    const double h_ux = entropy_of(mux);
    const double h_uvx = entropy_of(m);
    const double h_x = entropy_bits(px_);

    AuxTerms t;
    t.min_i_vy_given_u = std::numeric_limits<double>::infinity();
    for (const auto& c : ch_) {
      const Eigen::MatrixXd puvy = m * c.y_given_x;
      const Eigen::MatrixXd puy = mux * c.y_given_x;
      const Eigen::MatrixXd puvz = m * c.z_given_x;
      const Eigen::MatrixXd puz = mux * c.z_given_x;
      const double h_uvy = entropy_of(puvy), h_uy = entropy_of(puy);
      const double h_y = entropy_bits(puy.colwise().sum());
      const double i_vy = std::max(0.0, h_uv + h_uy - h_uvy - h_u);
      const double i_vz = std::max(0.0, h_uv + entropy_of(puz) - entropy_of(puvz) - h_u);
      const double i_ux_y = std::max(0.0, h_uy + h_x - h_ux - h_y);
      const double i_vx_uy = std::max(0.0, h_uvy + h_ux - h_uvx - h_uy);
      t.min_i_vy_given_u = std::min(t.min_i_vy_given_u, i_vy);
      t.max_i_vz_given_u = std::max(t.max_i_vz_given_u, i_vz);
      t.max_i_ux_given_y = std::max(t.max_i_ux_given_y, i_ux_y);
      t.max_i_vx_given_uy = std::max(t.max_i_vx_given_uy, i_vx_uy);
    }
    return t;
  }

 private:
  Eigen::VectorXd px_;
  std::vector<MemberChannels> ch_;
};

// Candidate as a stack of simplex rows: |X| rows over V, then |V| rows over U.
struct Candidate {
  Eigen::MatrixXd w, q;
};

bool feasible(const AuxTerms& t, double gamma) {
  return std::isinf(gamma) || t.public_rate() <= gamma - kConstraintMargin;
}

// Number of compositions of q into d parts, saturating at `cap + 1`.
std::uint64_t compositions(int q, int d, std::uint64_t cap) {
  // C(q + d - 1, d - 1)
  long double c = 1.0L;
  for (int i = 1; i < d; ++i) {
    c = c * static_cast<long double>(q + i) / static_cast<long double>(i);
    if (c > static_cast<long double>(cap)) return cap + 1;
  }
  return static_cast<std::uint64_t>(std::llround(c));
}

// All compositions of q into d parts, as probability rows.
std::vector<Eigen::VectorXd> enumerate_simplex(int q, int d) {
  std::vector<Eigen::VectorXd> out;
  std::vector<int> c(d, 0);
  auto rec = [&](auto&& self, int pos, int left) -> void {
    if (pos == d - 1) {
      c[pos] = left;
      Eigen::VectorXd r(d);
      for (int i = 0; i < d; ++i) r(i) = static_cast<double>(c[i]) / q;
      out.push_back(r);
      return;
    }
    for (int v = left; v >= 0; --v) {
      c[pos] = v;
      self(self, pos + 1, left - v);
    }
  };
  rec(rec, 0, q);
  return out;
}

// Uniformly random composition of q into d parts (stars and bars).
Eigen::VectorXd sample_simplex(int q, int d, Rng& rng) {
  std::vector<int> bars;
  const int slots = q + d - 1;
  for (int j = slots - (d - 1); j < slots; ++j) {  // Floyd's subset sampling
    const int t = static_cast<int>(rng.below(static_cast<std::uint64_t>(j) + 1));
    if (std::find(bars.begin(), bars.end(), t) == bars.end())
      bars.push_back(t);
    else
      bars.push_back(j);
  }
  std::sort(bars.begin(), bars.end());
  Eigen::VectorXd r(d);
  int prev = -1;
  for (int i = 0; i < d - 1; ++i) {
    r(i) = static_cast<double>(bars[i] - prev - 1) / q;
    prev = bars[i];
  }
  r(d - 1) = static_cast<double>(slots - prev - 1) / q;
  return r;
}

struct Scored {
  Candidate cand;
  AuxTerms terms;
  double value = -std::numeric_limits<double>::infinity();
};

class ClassSearch {
 public:
  ClassSearch(const TermEvaluator& eval, double gamma, int u_size, int v_size,
              const SearchConfig& cfg)
      : eval_(eval), gamma_(gamma), nu_(u_size), nv_(v_size), cfg_(cfg) {}

  ClassRate run(int class_index, const std::vector<AuxChannelPair>& extra) {
    ClassRate out;
    out.class_index = class_index;
    const int nx = eval_.x_size();
    const int rows = nx + nv_;
    auto row_dim = [&](int r) { return r < nx ? nv_ : nu_; };

    std::uint64_t total = 1;
    bool over = false;
    for (int r = 0; r < rows; ++r) {
      const std::uint64_t c = compositions(cfg_.grid, row_dim(r), cfg_.max_grid_points);
      if (c > cfg_.max_grid_points || total > cfg_.max_grid_points / c) {
        over = true;
        break;
      }
      total *= c;
    }

    std::vector<Scored> top;
    auto offer = [&](const Candidate& c) {
      const AuxTerms t = eval_(c.w, c.q);
      if (!feasible(t, gamma_)) return;
      Scored s{c, t, t.objective()};
      if (static_cast<int>(top.size()) < cfg_.restarts) {
        top.push_back(std::move(s));
      } else {
        auto worst = std::min_element(top.begin(), top.end(), [](const Scored& a, const Scored& b) {
          return a.value < b.value;
        });
        if (s.value > worst->value) *worst = std::move(s);
      }
    };

    Candidate c{Eigen::MatrixXd(nx, nv_), Eigen::MatrixXd(nv_, nu_)};
    auto set_row = [&](Candidate& cd, int r, const Eigen::VectorXd& v) {
      if (r < nx)
        cd.w.row(r) = v.transpose();
      else
        cd.q.row(r - nx) = v.transpose();
    };
    if (!over) {
      std::map<int, std::vector<Eigen::VectorXd>> lists;
      for (int r = 0; r < rows; ++r)
        if (!lists.count(row_dim(r))) lists[row_dim(r)] = enumerate_simplex(cfg_.grid, row_dim(r));
      std::vector<std::size_t> idx(rows, 0);
      for (std::uint64_t k = 0; k < total; ++k) {
        for (int r = 0; r < rows; ++r) set_row(c, r, lists[row_dim(r)][idx[r]]);
        offer(c);
        for (int r = 0; r < rows; ++r) {
          if (++idx[r] < lists[row_dim(r)].size()) break;
          idx[r] = 0;
        }
      }
      out.grid_points = total;
    } else {
      Rng rng(derive_seed(cfg_.sample_seed, static_cast<std::uint64_t>(class_index),
                          StreamTag::kAuxiliary));
      for (std::uint64_t k = 0; k < cfg_.max_grid_points; ++k) {
        for (int r = 0; r < rows; ++r) set_row(c, r, sample_simplex(cfg_.grid, row_dim(r), rng));
        offer(c);
      }
      out.grid_points = cfg_.max_grid_points;
      out.grid_sampled = true;
    }

    // Structural seeds are always refined.
    std::vector<Candidate> seeds;
    for (const auto& s : top) seeds.push_back(s.cand);
    Candidate structural{Eigen::MatrixXd::Zero(nx, nv_), Eigen::MatrixXd::Zero(nv_, nu_)};
    structural.q.col(0).setOnes();
    if (nv_ >= nx) {
      for (int x = 0; x < nx; ++x) structural.w(x, x) = 1.0;
    } else {
      structural.w.col(0).setOnes();
    }
    seeds.push_back(structural);
    for (const auto& a : extra) {
      if (a.x_size() != nx || a.v_size() != nv_ || a.u_size() != nu_)
        throw SpecError("lower bound: seed channel sizes do not match the search");
      seeds.push_back({a.v_given_x.matrix(), a.u_given_v.matrix()});
    }

    Scored best;
    for (const auto& s : seeds) {
      Scored r = refine(s, out.sweeps);
      if (r.value > best.value) best = std::move(r);
    }
    if (std::isfinite(best.value)) {
      out.feasible = true;
      out.value = best.value;
      out.terms = best.terms;
      out.optimizer = AuxChannelPair(Channel(best.cand.w), Channel(best.cand.q));
      out.constraint_slack = std::isinf(gamma_) ? kInfiniteGamma : gamma_ - best.terms.public_rate();
    }
    return out;
  }

 private:
  // Cyclic coordinate ascent: move `step` of mass between two entries of one
  // row, halving the step once a sweep gains less than tol.
  Scored refine(Candidate c, int& sweeps_used) const {
    Scored cur;
    cur.terms = eval_(c.w, c.q);
    if (!feasible(cur.terms, gamma_)) return cur;
    cur.value = cur.terms.objective();
    double step = 1.0 / cfg_.grid;
    for (int sweep = 0; sweep < cfg_.max_sweeps; ++sweep) {
      ++sweeps_used;
      const double start = cur.value;
      for (int which = 0; which < 2; ++which) {
        Eigen::MatrixXd& m = which == 0 ? c.w : c.q;
        for (Eigen::Index r = 0; r < m.rows(); ++r)
          for (Eigen::Index a = 0; a < m.cols(); ++a)
            for (Eigen::Index b = 0; b < m.cols(); ++b) {
              if (a == b) continue;
              const double amt = std::min(step, m(r, a));
              if (amt <= 0.0) continue;
              const double ra = m(r, a), rb = m(r, b);
              m(r, a) = ra - amt;
              m(r, b) = rb + amt;
              const AuxTerms t = eval_(c.w, c.q);
              if (feasible(t, gamma_) && t.objective() > cur.value + 1e-15) {
                cur.value = t.objective();
                cur.terms = t;
              } else {
                m(r, a) = ra;
                m(r, b) = rb;
              }
            }
      }
      if (cur.value - start < cfg_.tol) {
        step *= 0.5;
        if (step < cfg_.tol) break;
      }
    }
    cur.cand = std::move(c);
    return cur;
  }

  const TermEvaluator& eval_;
  double gamma_;
  int nu_, nv_;
  SearchConfig cfg_;
};

}  // namespace

AuxTerms aux_terms(const CompoundSource& src, const std::vector<int>& members,
                   const AuxChannelPair& aux) {
  if (members.empty()) throw SpecError("aux_terms: empty member list");
  if (aux.x_size() != src.x_size()) throw SpecError("aux_terms: channel input size mismatch");
  return TermEvaluator(src, members)(aux.v_given_x.matrix(), aux.u_given_v.matrix());
}

RateReport secret_key_lower_bound(const CompoundSource& src, double gamma, int u_size,
                                  int v_size, const SearchConfig& cfg,
                                  const std::vector<std::vector<AuxChannelPair>>& seeds) {
  if (!(gamma > 0.0)) throw DomainError("lower bound: gamma must be positive");
  if (u_size < 1 || v_size < 1) throw DomainError("lower bound: auxiliary sizes must be >= 1");
  if (cfg.grid < 1 || cfg.restarts < 0 || cfg.max_sweeps < 0)
    throw DomainError("lower bound: invalid search configuration");
  const auto classes = marginal_partition(src);
  if (!seeds.empty() && seeds.size() != classes.size())
    throw SpecError("lower bound: seeds must list one entry per class");

  RateReport rep;
  rep.gamma = gamma;
  rep.u_size = u_size;
  rep.v_size = v_size;
  rep.config = cfg;
  double raw = std::numeric_limits<double>::infinity();
  bool all_feasible = true;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    const TermEvaluator eval(src, classes[c].members);
    ClassSearch search(eval, gamma, u_size, v_size, cfg);
    ClassRate cr = search.run(static_cast<int>(c), seeds.empty() ? std::vector<AuxChannelPair>{}
                                                                  : seeds[c]);
    if (!cr.feasible) all_feasible = false;
    raw = std::min(raw, cr.feasible ? cr.value : 0.0);
    rep.per_class.push_back(std::move(cr));
  }
  if (!all_feasible) {
    rep.flags.push_back("constraint-infeasible at searched resolution");
    raw = std::min(raw, 0.0);
  }
  rep.raw = raw;
  rep.clamped = raw < 0.0;
  rep.value = std::max(0.0, raw);
  if (rep.clamped) rep.flags.push_back("negative value clamped to 0");
  return rep;
}

namespace {

Channel kron_power(const Channel& c, int n) {
  Channel out = c;
  for (int k = 1; k < n; ++k) out = kronecker(out, c);
  return out;
}

int int_power(int base, int n, int cap) {
  long v = 1;
  for (int k = 0; k < n; ++k) {
    v *= base;
    if (v > cap) return cap + 1;
  }
  return static_cast<int>(v);
}

}  // namespace

MultiLetterRate multi_letter_rate(const CompoundSource& src, int n, int u_size, int v_size,
                                  const SearchConfig& cfg, int max_alphabet) {
  if (n < 1) throw DomainError("multi-letter rate: n must be positive");
  MultiLetterRate out;
  out.n = n;
  out.single_letter = secret_key_lower_bound(src, kInfiniteGamma, u_size, v_size, cfg);
  if (n == 1) {
    out.block = out.single_letter;
    out.a_n = out.block.value;
    out.value = out.a_n;
    return out;
  }
  const int un = int_power(u_size, n, max_alphabet);
  const int vn = int_power(v_size, n, max_alphabet);
  if (un > max_alphabet || vn > max_alphabet)
    throw BudgetError("multi-letter rate: auxiliary block alphabet exceeds " +
                      std::to_string(max_alphabet));
  const CompoundSource block = product_source(src, n, max_alphabet);
  std::vector<std::vector<AuxChannelPair>> seeds;
  for (const auto& cr : out.single_letter.per_class) {
    std::vector<AuxChannelPair> s;
    if (cr.optimizer)
      s.emplace_back(kron_power(cr.optimizer->v_given_x, n), kron_power(cr.optimizer->u_given_v, n));
    seeds.push_back(std::move(s));
  }
  out.block = secret_key_lower_bound(block, kInfiniteGamma, un, vn, cfg, seeds);
  out.a_n = out.block.value;
  out.value = out.a_n / n;
  return out;
}

namespace {

struct RowCheck {
  int bad = -1;  // first entry violating either inequality
  double max_diff = 0.0;
  double max_ratio = 0.0;
};

RowCheck check_row(const Eigen::RowVectorXd& w, const std::vector<int>& units, int l,
                   double diff_limit, double ratio_limit) {
  RowCheck rc;
  for (Eigen::Index u = 0; u < w.size(); ++u) {
    const double q = static_cast<double>(units[u]) / l;
    const double d = std::abs(w(u) - q);
    rc.max_diff = std::max(rc.max_diff, d);
    bool ok = d <= diff_limit + 1e-12;
    if (w(u) > 0.0) {
      if (q <= 0.0) {
        ok = false;
        rc.max_ratio = std::numeric_limits<double>::infinity();
      } else {
        rc.max_ratio = std::max(rc.max_ratio, w(u) / q);
        ok = ok && w(u) <= ratio_limit * q;
      }
    }
    if (!ok && rc.bad < 0) rc.bad = static_cast<int>(u);
  }
  return rc;
}

}  // namespace

QuantizedFamily quantize_family(const std::vector<Channel>& family, int l) {
  if (family.empty()) throw SpecError("quantize: empty family");
  const int nx = family.front().inputs();
  const int nu = family.front().outputs();
  if (l < 2 * nu * nu)
    throw DomainError("quantize: need l >= 2|U|^2 = " + std::to_string(2 * nu * nu));
  QuantizedFamily out;
  out.l = l;
  out.ratio_limit = std::exp(2.0 * nu * nu / l);
  out.log2_net_limit = static_cast<double>(nx) * nu * std::log2(static_cast<double>(l) + 1.0);
  const double diff_limit = static_cast<double>(nu) / l;
  std::map<std::vector<int>, int> index;

  for (std::size_t s = 0; s < family.size(); ++s) {
    const Channel& ch = family[s];
    if (ch.inputs() != nx || ch.outputs() != nu)
      throw SpecError("quantize: channels must share input and output sizes");
    std::vector<int> all_units;
    Eigen::MatrixXd wq(nx, nu);
    for (int x = 0; x < nx; ++x) {
      const Eigen::RowVectorXd w = ch.matrix().row(x);
      std::vector<int> units(nu);
      int sum = 0;
      for (int u = 0; u < nu; ++u) {
        units[u] = static_cast<int>(std::floor(w(u) * l + 1e-9));
        sum += units[u];
      }
      Eigen::Index largest = 0;
      w.maxCoeff(&largest);
      units[largest] += l - sum;

      RowCheck rc = check_row(w, units, l, diff_limit, out.ratio_limit);
      for (int pass = 0; pass < 3 && rc.bad >= 0; ++pass) {
        // Round violating entries up, then take the excess from the largest
        // entries that are not violating.
        std::vector<bool> raised(nu, false);
        for (int u = 0; u < nu; ++u) {
          const double q = static_cast<double>(units[u]) / l;
          if (w(u) > 0.0 && w(u) > out.ratio_limit * q) {
            units[u] = std::max(units[u], static_cast<int>(std::ceil(w(u) * l - 1e-9)));
            raised[u] = true;
          }
        }
        int excess = -l;
        for (int v : units) excess += v;
        while (excess > 0) {
          int pick = -1;
          for (int u = 0; u < nu; ++u)
            if (!raised[u] && units[u] > 0 && (pick < 0 || units[u] > units[pick])) pick = u;
          if (pick < 0) break;
          --units[pick];
          --excess;
        }
        rc = check_row(w, units, l, diff_limit, out.ratio_limit);
      }
      if (rc.bad >= 0) {
        std::ostringstream os;
        os << "quantize: bounds fail at (state " << s << ", x " << x << ", u " << rc.bad << ")";
        throw DomainError(os.str());
      }
      out.max_abs_diff = std::max(out.max_abs_diff, rc.max_diff);
      out.max_ratio = std::max(out.max_ratio, rc.max_ratio);
      for (int u = 0; u < nu; ++u) wq(x, u) = static_cast<double>(units[u]) / l;
      all_units.insert(all_units.end(), units.begin(), units.end());
    }
    auto [it, inserted] = index.emplace(all_units, static_cast<int>(out.net.size()));
    if (inserted) out.net.emplace_back(wq);
    out.assignment.push_back(it->second);
  }
  return out;
}

double mi_continuity_bound(double gamma, int x_size, int y_size) {
  if (x_size < 1 || y_size < 1) throw DomainError("continuity bound: sizes must be >= 1");
  const double m = static_cast<double>(x_size) * y_size;
  if (!(gamma >= 0.0) || gamma > 1.0 - 1.0 / m + 1e-15)
    throw DomainError("continuity bound: need 0 <= gamma <= 1 - 1/(|X||Y|)");
  if (gamma == 0.0) return 0.0;
  return 3.0 * gamma * std::log2(m - 1.0) + 3.0 * binary_entropy(gamma);
}

ConverseIdentityReport converse_identity_check(const CompoundSource& src, double tol) {
  const DegradednessReport deg = check_degraded(src, tol);
  ConverseIdentityReport out;
  out.degraded = deg.degraded;
  for (const auto& p : deg.pairs) {
    ConverseIdentityEntry e;
    e.class_index = p.class_index;
    e.r = p.r;
    e.t = p.t;
    if (!p.feasible || !p.witness) {
      e.note = "no degrading channel for this pair; skipped";
      out.entries.push_back(e);
      continue;
    }
    const JointPmf xy = src.xy(p.r);
    const int nx = xy.dim(0), ny = xy.dim(1), nz = p.witness->outputs();
    Eigen::VectorXd mass(nx * ny * nz);
    for (int x = 0; x < nx; ++x)
      for (int y = 0; y < ny; ++y)
        for (int z = 0; z < nz; ++z) mass((x * ny + y) * nz + z) = xy(x, y) * (*p.witness)(y, z);
    const JointPmf coupled({nx, ny, nz}, mass);
    e.checked = true;
    e.lhs = mutual_information(xy) - mutual_information(src.xz(p.t));
    e.rhs = conditional_mutual_information(coupled, 2);
    e.error = std::abs(e.lhs - e.rhs);
    out.max_error = std::max(out.max_error, e.error);
    out.entries.push_back(e);
  }
  return out;
}

}  // namespace skg
