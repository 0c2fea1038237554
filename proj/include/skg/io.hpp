#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "skg/protocol.hpp"

namespace skg {

using Json = nlohmann::ordered_json;

// Source spec:
//   { "alphabets": {"x": 2, "y": 2, "z": 2},
//     "states": [ {"label": "s0", "joint": ["1/4", 0.25, "0.125", ...]} ] }
// The joint is row-major over (x, y, z), z fastest. Entries are numbers,
// decimal strings or exact fractions "a/b". Errors name the JSON path.
CompoundSource parse_source_spec(const std::string& text);
CompoundSource load_source_spec(const std::string& path);

// Auxiliary channels, one entry per marginal class:
//   { "classes": [ {"v_given_x": [[...], ...], "u_given_v": [[...], ...]} ] }
std::vector<AuxChannelPair> parse_aux_spec(const std::string& text);
std::vector<AuxChannelPair> load_aux_spec(const std::string& path);

// Parses a probability entry: number, decimal string or "a/b".
double parse_probability(const Json& v, const std::string& path);

// Rounds to 12 significant digits; non-finite values become strings.
Json number(double v);

Json to_json(const CompoundSource& src);
Json to_json(const Channel& c);
Json to_json(const AuxChannelPair& a);
Json to_json(const DegradedCapacity& c);
Json to_json(const DegradednessReport& r);
Json to_json(const RateReport& r);
Json to_json(const MultiLetterRate& r);
Json to_json(const QuantizedFamily& q);
Json to_json(const ConverseIdentityReport& r);
Json to_json(const CodebookSizes& s);
Json to_json(const SecurityAssessment& s);
Json to_json(const RunReport& r, const CompoundSource& src);
Json to_json(const SweepTable& t);
Json to_json(const ProtocolConfig& c);

// Wraps `result` as {"command", "result", "metadata"}. The metadata block
// holds the wall-clock timestamp and is the only non-deterministic part.
Json result_document(const std::string& command, Json config, Json result);
// Serialisation with the metadata block removed, for byte comparisons.
std::string canonical_dump(const Json& doc);
std::string dump_document(const Json& doc);

std::string to_csv(const SweepTable& t);

}  // namespace skg
