#include <cmath>

#include "doctest.h"
#include "skg/errors.hpp"
#include "skg/security.hpp"

using namespace skg;

TEST_CASE("extractor tables are uniform draws onto 1..k") {
  const KeyExtractor a = draw_extractor(1000, 5, 17);
  const KeyExtractor b = draw_extractor(1000, 5, 17);
  CHECK(a.table() == b.table());
  CHECK(a.domain_size() == 1000);
  std::vector<int> hist(6, 0);
  for (int v : a.table()) {
    REQUIRE(v >= 1);
    REQUIRE(v <= 5);
    ++hist[v];
  }
  for (int v = 1; v <= 5; ++v) CHECK(hist[v] == doctest::Approx(200).epsilon(0.25));
  const Pmf img = pushforward(a, Pmf::uniform(1000));
  CHECK(img.size() == 5);
  CHECK(img(0) == doctest::Approx(hist[1] / 1000.0));
}

TEST_CASE("extractor bounds") {
  CHECK(extractor_deviation_bound(4096, 0.1, 0.0, 4) ==
        doctest::Approx(8.0 * std::exp(-4096 * 0.01 / 8.8)).epsilon(1e-14));
  CHECK(extractor_deviation_bound(4096, 0.1, 0.0, 4) == doctest::Approx(0.0761458).epsilon(1e-5));
  // (0.01 + 0.01) * 2 + h(0.015)
  CHECK(good_set_security_bound(0.01, 0.005, 4) ==
        doctest::Approx(0.04 + 0.11236071009937675).epsilon(1e-9));
}

TEST_CASE("security index of independent and identical pairs") {
  // K uniform on 4 values, V independent.
  const JointPmf indep({4, 3}, Eigen::VectorXd::Constant(12, 1.0 / 12));
  CHECK(security_index(indep, 4) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  // K = V.
  Eigen::VectorXd m = Eigen::VectorXd::Zero(16);
  for (int i = 0; i < 4; ++i) m(i * 4 + i) = 0.25;
  CHECK(security_index(JointPmf({4, 4}, m), 4) == doctest::Approx(2.0).epsilon(1e-14));
  // Biased K, V constant: log2 2 - h(0.25).
  const JointPmf biased({2, 1}, Eigen::Vector2d(0.75, 0.25));
  CHECK(security_index(biased, 2) == doctest::Approx(1.0 - 0.811278124459).epsilon(1e-10));
}

namespace {

// X uniform, Y = Z = X.
CompoundSource transparent_source() {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(8);
  m(0) = 0.5;
  m(7) = 0.5;
  return CompoundSource(Alphabet(2), Alphabet(2), Alphabet(2), {"s"}, {JointPmf({2, 2, 2}, m)});
}

InstanceConfig small_instance(int n) {
  InstanceConfig c;
  c.n = n;
  c.delta = 0.05;
  c.typicality = {0.1, 0.2, 0.25, 0.3};
  c.aux = {AuxChannelPair::single_layer(Channel::identity(2))};
  c.key_size = 2;
  c.master_seed = 1;
  return c;
}

}  // namespace

TEST_CASE("an eavesdropper who sees X learns the whole key") {
  const CompoundSource src = transparent_source();
  const ProtocolInstance inst(src, small_instance(6));
  SecurityOptions exact;
  exact.mode = SecurityMode::kExact;
  const SecurityAssessment e = assess_security(inst, exact);
  REQUIRE(e.states.size() == 1);
  CHECK(e.states[0].index_full == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.max_index_full == doctest::Approx(1.0).epsilon(1e-12));

  SecurityOptions plug;
  plug.mode = SecurityMode::kPlugin;
  plug.plugin_samples = 20000;
  plug.plugin_seed = 2;
  const SecurityAssessment p = assess_security(inst, plug);
  CHECK(p.states[0].index_full == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("exact security respects the enumeration budget") {
  const CompoundSource src = transparent_source();
  const ProtocolInstance inst(src, small_instance(12));
  SecurityOptions exact;
  exact.mode = SecurityMode::kExact;
  exact.exact_budget = 1000;
  CHECK_THROWS_AS(assess_security(inst, exact), BudgetError);
}

TEST_CASE("extractor failure rate at the matching threshold") {
  // Threshold eps + 2 eta = 0.1 with the bound evaluated at eps = 0.1.
  const Pmf p = Pmf::uniform(4096);
  int over = 0;
  const int draws = 300;
  for (int t = 0; t < draws; ++t)
    if (variational_distance(pushforward(draw_extractor(4096, 4, 900 + t), p), Pmf::uniform(4)) > 0.1)
      ++over;
  const double bound = extractor_deviation_bound(4096, 0.1, 0.0, 4);
  CHECK(over / static_cast<double>(draws) <= bound + 3 * std::sqrt(bound * (1 - bound) / draws));
}
