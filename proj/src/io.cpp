#include "skg/io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

namespace skg {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Json parse_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream os;
    os << "syntax error at line " << line << ", column " << col << ": " << e.what();
    throw SpecError(os.str());
  }
}

const Json& require(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw SpecError(path + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SpecError(path + ": missing field '" + key + "'");
  return *it;
}

int parse_size(const Json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<long long>() < 1 || v.get<long long>() > 256)
    throw SpecError(path + ": expected an integer alphabet size in 1..256");
  return v.get<int>();
}

bool parse_integer(const std::string& s, long long& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  out = std::strtoll(s.c_str(), &end, 10);
  return errno == 0 && end == s.c_str() + s.size();
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

Channel parse_channel(const Json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) throw SpecError(path + ": expected a non-empty array of rows");
  const std::size_t cols = v[0].is_array() ? v[0].size() : 0;
  if (cols == 0) throw SpecError(path + "[0]: expected a non-empty row");
  Eigen::MatrixXd m(v.size(), cols);
  for (std::size_t r = 0; r < v.size(); ++r) {
    const std::string rp = path + "[" + std::to_string(r) + "]";
    if (!v[r].is_array() || v[r].size() != cols)
      throw SpecError(rp + ": expected a row of " + std::to_string(cols) + " entries");
    for (std::size_t c = 0; c < cols; ++c)
      m(r, c) = parse_probability(v[r][c], rp + "[" + std::to_string(c) + "]");
  }
  try {
    return Channel(m);
  } catch (const SpecError& e) {
    throw SpecError(path + ": " + e.what());
  }
}

}  // namespace

double parse_probability(const Json& v, const std::string& path) {
  if (v.is_number()) return v.get<double>();
  if (!v.is_string()) throw SpecError(path + ": expected a number or a string");
  const std::string s = trim(v.get<std::string>());
  const auto slash = s.find('/');
  if (slash != std::string::npos) {
    long long a = 0, b = 0;
    if (!parse_integer(trim(s.substr(0, slash)), a) || !parse_integer(trim(s.substr(slash + 1)), b))
      throw SpecError(path + ": malformed fraction '" + s + "'");
    if (b <= 0) throw SpecError(path + ": fraction denominator must be positive");
    return static_cast<double>(static_cast<long double>(a) / static_cast<long double>(b));
  }
  char* end = nullptr;
  const double d = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(d))
    throw SpecError(path + ": malformed number '" + s + "'");
  return d;
}

CompoundSource parse_source_spec(const std::string& text) {
  const Json doc = parse_text(text);
  const Json& alph = require(doc, "alphabets", "$");
  const int nx = parse_size(require(alph, "x", "$.alphabets"), "$.alphabets.x");
  const int ny = parse_size(require(alph, "y", "$.alphabets"), "$.alphabets.y");
  const int nz = parse_size(require(alph, "z", "$.alphabets"), "$.alphabets.z");
  const Json& states = require(doc, "states", "$");
  if (!states.is_array() || states.empty())
    throw SpecError("$.states: expected a non-empty array");
  std::vector<std::string> labels;
  std::vector<JointPmf> joints;
  for (std::size_t s = 0; s < states.size(); ++s) {
    const std::string sp = "$.states[" + std::to_string(s) + "]";
    const Json& st = states[s];
    std::string label = "s" + std::to_string(s);
    if (st.is_object() && st.contains("label")) {
      if (!st["label"].is_string() || st["label"].get<std::string>().empty())
        throw SpecError(sp + ".label: expected a non-empty string");
      label = st["label"].get<std::string>();
    }
    const Json& joint = require(st, "joint", sp);
    const std::size_t want = static_cast<std::size_t>(nx) * ny * nz;
    if (!joint.is_array() || joint.size() != want)
      throw SpecError(sp + ".joint: expected " + std::to_string(want) + " entries (|X||Y||Z|)");
    Eigen::VectorXd mass(want);
    for (std::size_t i = 0; i < want; ++i)
      mass(i) = parse_probability(joint[i], sp + ".joint[" + std::to_string(i) + "]");
    try {
      joints.emplace_back(std::vector<int>{nx, ny, nz}, mass);
    } catch (const SpecError& e) {
      throw SpecError(sp + ".joint: " + e.what());
    }
    labels.push_back(label);
  }
  return CompoundSource(Alphabet(nx), Alphabet(ny), Alphabet(nz), labels, joints);
}

CompoundSource load_source_spec(const std::string& path) {
  try {
    return parse_source_spec(read_file(path));
  } catch (const SpecError& e) {
    throw SpecError(path + ": " + e.what());
  }
}

std::vector<AuxChannelPair> parse_aux_spec(const std::string& text) {
  const Json doc = parse_text(text);
  const Json& classes = require(doc, "classes", "$");
  if (!classes.is_array() || classes.empty())
    throw SpecError("$.classes: expected a non-empty array");
  std::vector<AuxChannelPair> out;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    const std::string cp = "$.classes[" + std::to_string(c) + "]";
    const Channel vx = parse_channel(require(classes[c], "v_given_x", cp), cp + ".v_given_x");
    const Channel uv = parse_channel(require(classes[c], "u_given_v", cp), cp + ".u_given_v");
    try {
      out.emplace_back(vx, uv);
    } catch (const SpecError& e) {
      throw SpecError(cp + ": " + e.what());
    }
  }
  return out;
}

std::vector<AuxChannelPair> load_aux_spec(const std::string& path) {
  try {
    return parse_aux_spec(read_file(path));
  } catch (const SpecError& e) {
    throw SpecError(path + ": " + e.what());
  }
}

Json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;
}

namespace {

Json numbers(const std::vector<double>& v) {
  Json a = Json::array();
  for (double d : v) a.push_back(number(d));
  return a;
}

Json check_json(const ConditionCheck& c) {
  Json j;
  j["evaluated"] = c.evaluated;
  if (c.evaluated) {
    j["pass"] = c.pass;
    j["value"] = number(c.value);
    j["limit"] = number(c.limit);
  }
  return j;
}

Json typicality_json(const TypicalityParams& t) {
  Json j;
  j["xi"] = number(t.xi);
  j["zeta"] = number(t.zeta);
  j["sigma"] = number(t.sigma);
  j["vartheta"] = number(t.vartheta);
  return j;
}

}  // namespace

Json to_json(const CompoundSource& src) {
  Json j;
  j["alphabets"] = {{"x", src.x_size()}, {"y", src.y_size()}, {"z", src.z_size()}};
  Json states = Json::array();
  for (int s = 0; s < src.num_states(); ++s) {
    std::vector<double> m(src.joint(s).mass().data(),
                          src.joint(s).mass().data() + src.joint(s).size());
    states.push_back({{"label", src.label(s)}, {"joint", numbers(m)}});
  }
  j["states"] = states;
  return j;
}

Json to_json(const Channel& c) {
  Json rows = Json::array();
  for (int r = 0; r < c.inputs(); ++r) {
    Json row = Json::array();
    for (int k = 0; k < c.outputs(); ++k) row.push_back(number(c(r, k)));
    rows.push_back(row);
  }
  return rows;
}

Json to_json(const AuxChannelPair& a) {
  Json j;
  j["v_given_x"] = to_json(a.v_given_x);
  j["u_given_v"] = to_json(a.u_given_v);
  return j;
}

Json to_json(const DegradedCapacity& c) {
  Json j;
  j["value"] = number(c.value);
  j["raw"] = number(c.raw);
  j["clamped"] = c.clamped;
  j["degraded"] = c.degraded;
  j["per_class"] = numbers(c.per_class);
  j["flags"] = c.flags;
  return j;
}

Json to_json(const DegradednessReport& r) {
  Json j;
  j["degraded"] = r.degraded;
  Json pairs = Json::array();
  for (const auto& p : r.pairs) {
    Json e;
    e["class"] = p.class_index;
    e["r"] = p.r;
    e["t"] = p.t;
    e["feasible"] = p.feasible;
    e["residual"] = number(p.residual);
    if (p.witness) e["witness"] = to_json(*p.witness);
    pairs.push_back(e);
  }
  j["pairs"] = pairs;
  return j;
}

Json to_json(const RateReport& r) {
  Json j;
  j["value"] = number(r.value);
  j["raw"] = number(r.raw);
  j["clamped"] = r.clamped;
  j["gamma"] = number(r.gamma);
  j["u_size"] = r.u_size;
  j["v_size"] = r.v_size;
  j["search"] = {{"grid", r.config.grid},
                 {"max_grid_points", r.config.max_grid_points},
                 {"sample_seed", r.config.sample_seed},
                 {"restarts", r.config.restarts},
                 {"max_sweeps", r.config.max_sweeps},
                 {"tol", number(r.config.tol)}};
  Json classes = Json::array();
  for (const auto& c : r.per_class) {
    Json e;
    e["class"] = c.class_index;
    e["feasible"] = c.feasible;
    e["value"] = number(c.value);
    e["min_i_vy_given_u"] = number(c.terms.min_i_vy_given_u);
    e["max_i_vz_given_u"] = number(c.terms.max_i_vz_given_u);
    e["max_i_ux_given_y"] = number(c.terms.max_i_ux_given_y);
    e["max_i_vx_given_uy"] = number(c.terms.max_i_vx_given_uy);
    e["constraint_slack"] = number(c.constraint_slack);
    e["grid_points"] = c.grid_points;
    e["grid_sampled"] = c.grid_sampled;
    e["sweeps"] = c.sweeps;
    if (c.optimizer) e["optimizer"] = to_json(*c.optimizer);
    classes.push_back(e);
  }
  j["per_class"] = classes;
  j["flags"] = r.flags;
  return j;
}

Json to_json(const MultiLetterRate& r) {
  Json j;
  j["n"] = r.n;
  j["value"] = number(r.value);
  j["a_n"] = number(r.a_n);
  j["single_letter_value"] = number(r.single_letter.value);
  j["block"] = to_json(r.block);
  return j;
}

Json to_json(const QuantizedFamily& q) {
  Json j;
  j["l"] = q.l;
  j["net_size"] = q.net.size();
  j["log2_net_limit"] = number(q.log2_net_limit);
  j["max_abs_diff"] = number(q.max_abs_diff);
  j["max_ratio"] = number(q.max_ratio);
  j["ratio_limit"] = number(q.ratio_limit);
  j["assignment"] = q.assignment;
  Json net = Json::array();
  for (const auto& c : q.net) net.push_back(to_json(c));
  j["net"] = net;
  return j;
}

Json to_json(const ConverseIdentityReport& r) {
  Json j;
  j["degraded"] = r.degraded;
  j["max_error"] = number(r.max_error);
  Json entries = Json::array();
  for (const auto& e : r.entries) {
    Json x;
    x["class"] = e.class_index;
    x["r"] = e.r;
    x["t"] = e.t;
    x["checked"] = e.checked;
    if (e.checked) {
      x["lhs"] = number(e.lhs);
      x["rhs"] = number(e.rhs);
      x["error"] = number(e.error);
    } else {
      x["note"] = e.note;
    }
    entries.push_back(x);
  }
  j["entries"] = entries;
  return j;
}

Json to_json(const CodebookSizes& s) {
  Json j;
  j["max_i_ux_given_y"] = number(s.max_i_ux_given_y);
  j["min_i_uy"] = number(s.min_i_uy);
  j["max_i_vx_given_uy"] = number(s.max_i_vx_given_uy);
  j["min_i_vy_given_u"] = number(s.min_i_vy_given_u);
  j["n1"] = s.n1;
  j["n2"] = s.n2;
  j["n3"] = s.n3;
  j["n4"] = s.n4;
  j["warnings"] = s.warnings;
  return j;
}

Json to_json(const SecurityAssessment& s) {
  Json j;
  j["mode"] = s.mode == SecurityMode::kExact ? "exact" : "plugin";
  j["key_size"] = s.key_size;
  j["max_index_full"] = number(s.max_index_full);
  j["max_index_public"] = number(s.max_index_public);
  j["z_hashed"] = s.z_hashed;
  Json states = Json::array();
  for (const auto& st : s.states) {
    Json e;
    e["state"] = st.state;
    e["index_full"] = number(st.index_full);
    e["index_public"] = number(st.index_public);
    e["entropy_full"] = number(st.entropy_full);
    e["entropy_public"] = number(st.entropy_public);
    if (s.mode == SecurityMode::kPlugin) {
      e["samples"] = st.samples;
      e["bias_full"] = number(st.bias_full);
      e["bias_public"] = number(st.bias_public);
    }
    states.push_back(e);
  }
  j["states"] = states;
  return j;
}

Json to_json(const RunReport& r, const CompoundSource& src) {
  Json j;
  j["n"] = r.n;
  j["key_size"] = r.key_size;
  j["key_rate"] = number(r.key_rate);
  j["target_rate"] = number(r.target_rate);
  j["public_rate"] = number(r.public_rate);
  Json sizes = Json::array();
  for (const auto& s : r.sizes) sizes.push_back(to_json(s));
  j["codebooks"] = sizes;
  Json rel = Json::array();
  for (const auto& s : r.reliability) {
    Json e;
    e["state"] = src.label(s.state);
    e["trials"] = s.trials;
    e["disagreements"] = s.disagreements;
    e["alice_failures"] = s.alice_failures;
    e["bob_failures"] = s.bob_failures;
    e["misestimated"] = s.misestimated;
    e["rate"] = number(s.rate);
    e["ci_low"] = number(s.ci_low);
    e["ci_high"] = number(s.ci_high);
    rel.push_back(e);
  }
  j["reliability"] = rel;
  if (r.security) j["security"] = to_json(*r.security);
  j["conditions"] = {{"public_rate", check_json(r.public_rate_condition)},
                     {"key_rate", check_json(r.key_rate_condition)},
                     {"reliability", check_json(r.reliability_condition)},
                     {"secrecy", check_json(r.secrecy_condition)}};
  return j;
}

Json to_json(const SweepTable& t) {
  Json j;
  j["columns"] = t.columns;
  Json rows = Json::array();
  for (const auto& r : t.rows) rows.push_back(numbers(r));
  j["rows"] = rows;
  return j;
}

Json to_json(const ProtocolConfig& c) {
  Json j;
  j["n"] = c.instance.n;
  j["delta"] = number(c.instance.delta);
  j["typicality"] = typicality_json(c.instance.typicality);
  j["layer"] = c.instance.layer == Layer::kA ? "a" : "ab";
  j["key_size"] = c.instance.key_size;
  if (c.target_rate) j["target_rate"] = number(*c.target_rate);
  j["gamma"] = number(c.gamma);
  j["trials"] = c.trials;
  j["seeds"] = {{"master", c.instance.master_seed}, {"source", c.source_seed}};
  j["true_states"] = c.true_states;
  const char* sec = c.security == SecurityEvaluation::kNone    ? "none"
                    : c.security == SecurityEvaluation::kExact ? "exact"
                                                               : "plugin";
  j["security"] = sec;
  if (c.security == SecurityEvaluation::kPlugin) {
    j["plugin_samples"] = c.security_options.plugin_samples;
    j["plugin_seed"] = c.security_options.plugin_seed;
  }
  Json aux = Json::array();
  for (const auto& a : c.instance.aux) aux.push_back(to_json(a));
  j["aux"] = aux;
  return j;
}

Json result_document(const std::string& command, Json config, Json result) {
  Json doc;
  doc["command"] = command;
  doc["config"] = std::move(config);
  doc["result"] = std::move(result);
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  doc["metadata"] = {{"generated_at", buf}};
  return doc;
}

std::string canonical_dump(const Json& doc) {
  Json copy = doc;
  copy.erase("metadata");
  return copy.dump(2);
}

std::string dump_document(const Json& doc) { return doc.dump(2) + "\n"; }

std::string to_csv(const SweepTable& t) {
  std::ostringstream os;
  for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
  os << "\n";
  for (const auto& r : t.rows) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      os << (c ? "," : "");
      const Json v = number(r[c]);
      if (v.is_string())
        os << v.get<std::string>();
      else
        os << v.dump();
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace skg
