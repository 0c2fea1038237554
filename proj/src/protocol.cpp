#include "skg/protocol.hpp"

#include <cmath>

#include "skg/rng.hpp"

namespace skg {

void ProtocolConfig::validate(const CompoundSource& src) const {
  if (!(instance.delta > 0.0)) throw DomainError("protocol: delta must be positive");
  if (trials < 1) throw DomainError("protocol: trials must be >= 1");
  if (!(gamma > 0.0)) throw DomainError("protocol: gamma must be positive");
  if (target_rate && !(*target_rate >= 0.0)) throw DomainError("protocol: rate must be >= 0");
  instance.typicality.validate();
  for (int s : true_states)
    if (s < 0 || s >= src.num_states()) throw SpecError("protocol: true state out of range");
}

int key_size_for_rate(int n, double rate) {
  if (n < 1) throw DomainError("key size: n must be positive");
  const double bits = n * rate;
  if (bits > 30.0) throw BudgetError("key size: n*R above 30 bits is not supported");
  const double k = std::exp2(bits);
  const double r = std::round(k);
  const double kk = std::abs(k - r) <= 1e-9 * std::max(1.0, r) ? r : std::ceil(k);
  return std::max(1, static_cast<int>(kk));
}

TranscriptSample run_trial(const ProtocolInstance& inst, int state, std::uint64_t seed) {
  TranscriptSample t;
  t.block = sample_block(inst.source(), state, inst.config().n, seed);
  t.alice = inst.alice(t.block.x);
  t.bob = inst.bob(t.alice, t.block.y);
  return t;
}

namespace {

void wilson(long k, long n, double z, double& lo, double& hi) {
  const double p = static_cast<double>(k) / n;
  const double z2 = z * z;
  const double den = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / den;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / den;
  lo = std::max(0.0, center - half);
  hi = std::min(1.0, center + half);
}

int class_of_state(const ProtocolInstance& inst, int s) {
  for (const auto& c : inst.classes())
    for (int m : c.members)
      if (m == s) return c.index;
  return -1;
}

}  // namespace

RunReport run_protocol(const CompoundSource& src, const ProtocolConfig& cfg) {
  cfg.validate(src);
  InstanceConfig icfg = cfg.instance;
  if (cfg.target_rate) icfg.key_size = key_size_for_rate(icfg.n, *cfg.target_rate);
  const ProtocolInstance inst(src, icfg);

  RunReport rep;
  rep.n = icfg.n;
  rep.key_size = icfg.key_size;
  rep.key_rate = std::log2(static_cast<double>(icfg.key_size)) / icfg.n;
  rep.public_rate = inst.public_rate();
  rep.target_rate = cfg.target_rate.value_or(rep.key_rate);
  for (std::size_t c = 0; c < inst.classes().size(); ++c)
    rep.sizes.push_back(inst.setup(static_cast<int>(c)).sizes);

  std::vector<int> states = cfg.true_states;
  if (states.empty())
    for (int s = 0; s < src.num_states(); ++s) states.push_back(s);

  double worst = 0.0;
  for (int s : states) {
    StateReliability r;
    r.state = s;
    r.trials = cfg.trials;
    const int true_class = class_of_state(inst, s);
    const std::uint64_t state_seed =
        derive_seed(cfg.source_seed, static_cast<std::uint64_t>(s), StreamTag::kSource);
    for (long t = 0; t < cfg.trials; ++t) {
      const TranscriptSample tr =
          run_trial(inst, s, derive_seed(state_seed, static_cast<std::uint64_t>(t),
                                         StreamTag::kSource));
      if (!tr.agreed()) ++r.disagreements;
      if (tr.alice.key == 0) ++r.alice_failures;
      if (tr.alice.key != 0 && tr.bob.key == 0) ++r.bob_failures;
      if (tr.alice.estimated && tr.alice.cls != true_class) ++r.misestimated;
    }
    r.rate = static_cast<double>(r.disagreements) / r.trials;
    wilson(r.disagreements, r.trials, 3.0, r.ci_low, r.ci_high);
    worst = std::max(worst, r.rate);
    rep.reliability.push_back(r);
  }

  const double delta = icfg.delta;
  rep.public_rate_condition = {true, rep.public_rate < cfg.gamma + delta, rep.public_rate,
                               cfg.gamma + delta};
  rep.key_rate_condition = {true, rep.target_rate < rep.key_rate + delta, rep.target_rate,
                            rep.key_rate + delta};
  rep.reliability_condition = {true, worst < delta, worst, delta};

  if (cfg.security != SecurityEvaluation::kNone) {
    SecurityOptions opt = cfg.security_options;
    opt.mode = cfg.security == SecurityEvaluation::kExact ? SecurityMode::kExact
                                                           : SecurityMode::kPlugin;
    rep.security = assess_security(inst, opt);
    rep.secrecy_condition = {true, rep.security->max_index_full < delta,
                             rep.security->max_index_full, delta};
  }
  return rep;
}

SweepAxis parse_sweep_axis(const std::string& name) {
  if (name == "n") return SweepAxis::kN;
  if (name == "gamma") return SweepAxis::kGamma;
  if (name == "rate") return SweepAxis::kRate;
  if (name == "seed") return SweepAxis::kSeed;
  throw DomainError("sweep: unknown axis '" + name + "' (expected n, gamma, rate or seed)");
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kN: return "n";
    case SweepAxis::kGamma: return "gamma";
    case SweepAxis::kRate: return "rate";
    case SweepAxis::kSeed: return "seed";
  }
  return "";
}

SweepTable sweep(const CompoundSource& src, const ProtocolConfig& cfg, SweepAxis axis,
                 const std::vector<double>& values, const SweepOptions& opt) {
  SweepTable table;
  if (axis == SweepAxis::kGamma) {
    table.columns = {"gamma", "lower_bound", "raw", "feasible"};
    for (double g : values) {
      const RateReport r = secret_key_lower_bound(src, g, opt.u_size, opt.v_size, opt.search);
      bool feasible = true;
      for (const auto& c : r.per_class) feasible = feasible && c.feasible;
      table.rows.push_back({g, r.value, r.raw, feasible ? 1.0 : 0.0});
    }
    return table;
  }

  table.columns = {to_string(axis), "key_size", "key_rate", "public_rate"};
  if (axis != SweepAxis::kN) table.columns.insert(table.columns.begin() + 1, "n");
  std::vector<int> states = cfg.true_states;
  if (states.empty())
    for (int s = 0; s < src.num_states(); ++s) states.push_back(s);
  for (int s : states) {
    table.columns.push_back("disagreement_" + src.label(s));
    table.columns.push_back("ci_high_" + src.label(s));
  }
  if (cfg.security != SecurityEvaluation::kNone) table.columns.push_back("max_security_index");

  for (double v : values) {
    ProtocolConfig c = cfg;
    switch (axis) {
      case SweepAxis::kN:
        if (v < 1 || v != std::floor(v)) throw DomainError("sweep: n values must be integers >= 1");
        c.instance.n = static_cast<int>(v);
        break;
      case SweepAxis::kRate:
        c.target_rate = v;
        break;
      case SweepAxis::kSeed:
        if (v < 0 || v != std::floor(v)) throw DomainError("sweep: seeds must be integers >= 0");
        c.instance.master_seed = static_cast<std::uint64_t>(v);
        c.source_seed = static_cast<std::uint64_t>(v);
        break;
      case SweepAxis::kGamma:
        break;
    }
    const RunReport r = run_protocol(src, c);
    std::vector<double> row = {v, static_cast<double>(r.key_size), r.key_rate, r.public_rate};
    if (axis != SweepAxis::kN) row.insert(row.begin() + 1, static_cast<double>(r.n));
    for (const auto& s : r.reliability) {
      row.push_back(s.rate);
      row.push_back(s.ci_high);
    }
    if (r.security) row.push_back(r.security->max_index_full);
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace skg
