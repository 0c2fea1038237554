// Command-line front end: one subcommand per evaluator, JSON result documents.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "skg/io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitSpec = 2;
constexpr int kExitBudget = 3;

double parse_gamma(const std::string& s) {
  if (s == "inf" || s == "infinity" || s == "Inf") return skg::kInfiniteGamma;
  std::size_t used = 0;
  double g = 0.0;
  try {
    g = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size()) throw skg::DomainError("gamma must be a number or 'inf', got '" + s + "'");
  return g;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_gamma(item));
  if (out.empty()) throw skg::DomainError("empty value list");
  return out;
}

void emit(const skg::Json& doc, const std::string& out) {
  const std::string text = skg::dump_document(doc);
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw skg::SpecError("cannot write '" + out + "'");
  f << text;
}

void emit_csv(const skg::SweepTable& t, const std::string& path) {
  if (path.empty()) return;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw skg::SpecError("cannot write '" + path + "'");
  f << skg::to_csv(t);
}

struct SearchFlags {
  std::string gamma = "inf";
  int u_size = 1;
  int v_size = 2;
  skg::SearchConfig search;

  void add(CLI::App* app, bool with_gamma) {
    if (with_gamma) app->add_option("--gamma", gamma, "public rate limit, or inf");
    app->add_option("--u-size", u_size, "|U|");
    app->add_option("--v-size", v_size, "|V|");
    app->add_option("--grid", search.grid, "simplex grid resolution q (step 1/q)");
    app->add_option("--max-grid-points", search.max_grid_points,
                    "grid points above this count are sampled");
    app->add_option("--restarts", search.restarts, "seeds refined by coordinate ascent");
    app->add_option("--search-seed", search.sample_seed, "seed for grid sampling");
  }
};

struct SimulateFlags {
  int n = 50;
  long trials = 1000;
  std::uint64_t seed = 0;
  std::string layer = "a";
  std::string security = "none";
  double delta = 0.05;
  int key_size = 2;
  double rate = -1.0;
  std::string gamma = "inf";
  std::vector<std::string> states;
  std::string aux_path;
  double xi = -1, zeta = -1, sigma = -1, vartheta = -1;
  long plugin_samples = 1000000;

  void add(CLI::App* app) {
    app->add_option("--n", n, "block length");
    app->add_option("--trials", trials, "Monte Carlo trials per state");
    app->add_option("--seed", seed, "master seed for codebooks, extractors and sources");
    app->add_option("--layer", layer, "a or ab")->check(CLI::IsMember({"a", "ab"}));
    app->add_option("--security-mode", security, "none, exact or plugin")
        ->check(CLI::IsMember({"none", "exact", "plugin"}));
    app->add_option("--delta", delta, "rate slack");
    app->add_option("--key-size", key_size, "key alphabet size k");
    app->add_option("--rate", rate, "target key rate; sets k = ceil(2^{nR})");
    app->add_option("--gamma", gamma, "public rate limit, or inf");
    app->add_option("--state", states, "true state label (repeatable; default all)");
    app->add_option("--aux", aux_path, "auxiliary channel file, one entry per class");
    app->add_option("--xi", xi);
    app->add_option("--zeta", zeta);
    app->add_option("--sigma", sigma);
    app->add_option("--vartheta", vartheta);
    app->add_option("--plugin-samples", plugin_samples);
  }

  skg::ProtocolConfig build(const skg::CompoundSource& src) const {
    skg::ProtocolConfig c;
    c.instance.n = n;
    c.instance.delta = delta;
    c.instance.layer = layer == "ab" ? skg::Layer::kAB : skg::Layer::kA;
    c.instance.key_size = key_size;
    c.instance.master_seed = seed;
    c.source_seed = seed;
    c.trials = trials;
    c.gamma = parse_gamma(gamma);
    if (rate >= 0.0) c.target_rate = rate;
    for (const auto& s : states) c.true_states.push_back(src.state_index(s));

    double m = 1.0;
    for (int s = 0; s < src.num_states(); ++s) m = std::min(m, src.x_marginal(s).min_positive());
    skg::TypicalityParams tp = skg::TypicalityParams::scaled_defaults(m);
    if (xi > 0) tp.xi = xi;
    if (zeta > 0) tp.zeta = zeta;
    if (sigma > 0) tp.sigma = sigma;
    if (vartheta > 0) tp.vartheta = vartheta;
    c.instance.typicality = tp;

    const auto classes = skg::marginal_partition(src);
    if (!aux_path.empty()) {
      c.instance.aux = skg::load_aux_spec(aux_path);
    } else {
      const skg::Channel id = skg::Channel::identity(src.x_size());
      for (std::size_t k = 0; k < classes.size(); ++k)
        c.instance.aux.push_back(c.instance.layer == skg::Layer::kA
                                     ? skg::AuxChannelPair::single_layer(id)
                                     : skg::AuxChannelPair::constant_u(id));
    }
    if (security == "exact") c.security = skg::SecurityEvaluation::kExact;
    if (security == "plugin") c.security = skg::SecurityEvaluation::kPlugin;
    c.security_options.plugin_samples = plugin_samples;
    c.security_options.plugin_seed = seed;
    return c;
  }
};

skg::Channel yz_channel(const skg::CompoundSource& src, int s) {
  const int nyz = src.y_size() * src.z_size();
  return skg::conditional(skg::JointPmf({src.x_size(), nyz}, src.joint(s).mass()));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secret-key generation over compound sources: capacity evaluators and simulation"};
  app.require_subcommand(1);
  std::string spec_path, out_path, csv_path;

  auto add_common = [&](CLI::App* sub, bool spec_required) {
    auto* opt = sub->add_option("spec", spec_path, "source spec file");
    if (spec_required) opt->required();
    sub->add_option("--out", out_path, "result document path (default stdout)");
  };

  auto* cap = app.add_subcommand("capacity", "degraded secret-key capacity");
  add_common(cap, true);

  SearchFlags lb_flags;
  auto* lb = app.add_subcommand("lower-bound", "single-letter lower bound with a public rate limit");
  add_common(lb, true);
  lb_flags.add(lb, true);

  SearchFlags ml_flags;
  int ml_n = 2;
  auto* ml = app.add_subcommand("multi-letter", "block-length n lower bound divided by n");
  add_common(ml, true);
  ml_flags.add(ml, false);
  ml->add_option("--n", ml_n, "block length");

  SimulateFlags sim_flags;
  auto* sim = app.add_subcommand("simulate", "run the key agreement protocol");
  add_common(sim, true);
  sim_flags.add(sim);

  auto* deg = app.add_subcommand("check-degraded", "search degrading channels per class");
  add_common(deg, true);

  int q_l = 512;
  auto* quant = app.add_subcommand("quantize", "round the P(y,z|x) family onto a 1/l lattice");
  add_common(quant, true);
  quant->add_option("--l", q_l, "lattice denominator");

  double mi_gamma = 0.0;
  int mi_x = 2, mi_y = 2;
  auto* mib = app.add_subcommand("mi-bound", "mutual-information continuity bound");
  add_common(mib, false);
  mib->add_option("--gamma-param", mi_gamma, "half 1-norm distance")->required();
  mib->add_option("--x-size", mi_x);
  mib->add_option("--y-size", mi_y);

  SimulateFlags sw_flags;
  skg::SweepOptions sw_search;
  std::string sw_axis = "n", sw_values;
  auto* sw = app.add_subcommand("sweep", "repeat simulate or lower-bound along one axis");
  add_common(sw, true);
  sw_flags.add(sw);
  sw->add_option("--axis", sw_axis, "n, gamma, rate or seed")
      ->check(CLI::IsMember({"n", "gamma", "rate", "seed"}));
  sw->add_option("--values", sw_values, "comma-separated axis values")->required();
  sw->add_option("--csv", csv_path, "CSV table path");
  sw->add_option("--u-size", sw_search.u_size);
  sw->add_option("--v-size", sw_search.v_size);
  sw->add_option("--grid", sw_search.search.grid);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    using skg::Json;
    if (*mib) {
      Json cfg = {{"gamma", skg::number(mi_gamma)}, {"x_size", mi_x}, {"y_size", mi_y}};
      Json res = {{"bound", skg::number(skg::mi_continuity_bound(mi_gamma, mi_x, mi_y))}};
      emit(skg::result_document("mi-bound", cfg, res), out_path);
      return kExitOk;
    }
    const skg::CompoundSource src = skg::load_source_spec(spec_path);
    Json source = skg::to_json(src);
    if (*cap) {
      emit(skg::result_document("capacity", {{"source", source}},
                                skg::to_json(skg::degraded_capacity(src))),
           out_path);
    } else if (*lb) {
      const double g = parse_gamma(lb_flags.gamma);
      const auto r = skg::secret_key_lower_bound(src, g, lb_flags.u_size, lb_flags.v_size,
                                                 lb_flags.search);
      emit(skg::result_document("lower-bound", {{"source", source}}, skg::to_json(r)), out_path);
    } else if (*ml) {
      const auto r = skg::multi_letter_rate(src, ml_n, ml_flags.u_size, ml_flags.v_size,
                                            ml_flags.search);
      emit(skg::result_document("multi-letter", {{"source", source}}, skg::to_json(r)), out_path);
    } else if (*sim) {
      const skg::ProtocolConfig c = sim_flags.build(src);
      const skg::RunReport r = skg::run_protocol(src, c);
      emit(skg::result_document("simulate", {{"source", source}, {"protocol", skg::to_json(c)}},
                                skg::to_json(r, src)),
           out_path);
    } else if (*deg) {
      emit(skg::result_document("check-degraded", {{"source", source}},
                                skg::to_json(skg::check_degraded(src))),
           out_path);
    } else if (*quant) {
      std::vector<skg::Channel> family;
      for (int s = 0; s < src.num_states(); ++s) family.push_back(yz_channel(src, s));
      emit(skg::result_document("quantize", {{"source", source}, {"l", q_l}},
                                skg::to_json(skg::quantize_family(family, q_l))),
           out_path);
    } else if (*sw) {
      const skg::ProtocolConfig c = sw_flags.build(src);
      const auto axis = skg::parse_sweep_axis(sw_axis);
      const auto table = skg::sweep(src, c, axis, parse_list(sw_values), sw_search);
      emit_csv(table, csv_path);
      emit(skg::result_document("sweep",
                                {{"source", source}, {"protocol", skg::to_json(c)},
                                 {"axis", sw_axis}},
                                skg::to_json(table)),
           out_path);
    }
  } catch (const skg::SpecError& e) {
    std::cerr << "spec error: " << e.what() << "\n";
    return kExitSpec;
  } catch (const skg::BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const skg::DomainError& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}
