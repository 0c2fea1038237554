#include <cstdlib>
#include <fstream>
#include <string>

#include "doctest.h"
#include "skg/errors.hpp"
#include "skg/io.hpp"

using namespace skg;

namespace {

const std::string kSpecDir = SKG_SPEC_DIR;
const std::string kCli = SKG_CLI_PATH;

std::string source_text(const std::string& entry3) {
  return R"({"alphabets": {"x": 2, "y": 1, "z": 2},
             "states": [{"label": "s", "joint": ["1/4", 0.25, "0.125", )" +
         entry3 + "]}]}";
}

std::string error_of(const std::string& text) {
  try {
    parse_source_spec(text);
  } catch (const SpecError& e) {
    return e.what();
  }
  return "";
}

int run_cli(const std::string& args) {
  const int rc = std::system((kCli + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_CASE("source specs accept numbers, decimal strings and fractions") {
  const CompoundSource src = parse_source_spec(source_text("\"3/8\""));
  CHECK(src.x_size() == 2);
  CHECK(src.z_size() == 2);
  CHECK(src.joint(0)(1, 0, 1) == doctest::Approx(0.375).epsilon(1e-15));
  CHECK(src.joint(0)(0, 0, 0) == 0.25);
}

TEST_CASE("spec errors name the JSON path") {
  CHECK(error_of(source_text("\"3/x\"")).find("$.states[0].joint[3]") != std::string::npos);
  CHECK(error_of(source_text("\"1/0\"")).find("denominator") != std::string::npos);
  CHECK(error_of(source_text("0.5")).find("$.states[0]") != std::string::npos);
  CHECK(error_of("{\"alphabets\": {\"x\": 2,}").find("line") != std::string::npos);
  CHECK(error_of(R"({"alphabets": {"x": 0, "y": 1, "z": 1}, "states": []})").find("$.alphabets") !=
        std::string::npos);
  CHECK_THROWS_AS(load_source_spec(kSpecDir + "/missing.json"), SpecError);
}

TEST_CASE("auxiliary specs") {
  const auto aux = load_aux_spec(kSpecDir + "/cascade_aux.json");
  REQUIRE(aux.size() == 1);
  CHECK(aux[0].u_given_v.matrix()(0, 1) == doctest::Approx(13.0 / 40).epsilon(1e-15));
  CHECK_THROWS_AS(parse_aux_spec(R"({"classes": [{"v_given_x": [[0.5, 0.6]], "u_given_v": [[1]]}]})"),
                  SpecError);
}

TEST_CASE("numbers are rounded to twelve significant digits") {
  CHECK(number(0.1 + 0.2).get<double>() == 0.3);
  CHECK(number(-0.0).get<double>() == 0.0);
  CHECK(number(1.0 / 0.0) == "inf");
  CHECK(number(std::nan("")) == "nan");
}

TEST_CASE("canonical dumps ignore metadata") {
  const Json a = result_document("x", {{"k", 1}}, {{"v", 2}});
  Json b = a;
  b["metadata"]["generated_at"] = "elsewhere";
  CHECK(canonical_dump(a) == canonical_dump(b));
  CHECK(canonical_dump(a).find("metadata") == std::string::npos);
  CHECK(dump_document(a).find("generated_at") != std::string::npos);
}

TEST_CASE("command-line exit codes") {
  const std::string cascade = kSpecDir + "/bsc_cascade.json";
  CHECK(run_cli("capacity " + cascade) == 0);
  CHECK(run_cli("mi-bound --gamma-param 0.01") == 0);
  CHECK(run_cli("capacity") == 1);
  CHECK(run_cli("capacity " + cascade + " --no-such-flag") == 1);
  CHECK(run_cli("mi-bound --gamma-param 0.9") == 1);
  CHECK(run_cli("capacity " + kSpecDir + "/missing.json") == 2);
  CHECK(run_cli("multi-letter " + cascade + " --n 6") == 3);
}

TEST_CASE("command-line output is reproducible") {
  const std::string cascade = kSpecDir + "/bsc_cascade.json";
  const std::string a = "skg_cli_out_a.json", b = "skg_cli_out_b.json";
  const std::string args = "simulate " + cascade + " --n 20 --trials 50 --seed 4 --out ";
  REQUIRE(run_cli(args + a) == 0);
  REQUIRE(run_cli(args + b) == 0);
  std::ifstream fa(a), fb(b);
  const Json ja = Json::parse(fa), jb = Json::parse(fb);
  CHECK(canonical_dump(ja) == canonical_dump(jb));
  CHECK(ja["result"]["reliability"].size() == 2);
  std::remove(a.c_str());
  std::remove(b.c_str());
}
