#include <cmath>

#include "doctest.h"
#include "skg/aux_channels.hpp"
#include "skg/errors.hpp"
#include "skg/estimation.hpp"

using namespace skg;

namespace {

JointPmf bsc_pair(double px1, double py, double pz) {
  // X ~ Ber(px1), Y = BSC(py)(X), Z = BSC(pz)(X), Y and Z independent given X.
  Eigen::VectorXd m(8);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int z = 0; z < 2; ++z)
        m((x * 2 + y) * 2 + z) = (x ? px1 : 1 - px1) * (y == x ? 1 - py : py) * (z == x ? 1 - pz : pz);
  return JointPmf({2, 2, 2}, m);
}

CompoundSource two_states(double p0, double p1) {
  return CompoundSource(Alphabet(2), Alphabet(2), Alphabet(2), {"a", "b"},
                        {bsc_pair(p0, 0.1, 0.2), bsc_pair(p1, 0.1, 0.2)});
}

}  // namespace

TEST_CASE("source construction checks") {
  CHECK_THROWS_AS(CompoundSource(Alphabet(2), Alphabet(2), Alphabet(2), {"a", "a"},
                                 {bsc_pair(0.5, 0.1, 0.2), bsc_pair(0.5, 0.1, 0.2)}),
                  SpecError);
  CHECK_THROWS_AS(CompoundSource(Alphabet(2), Alphabet(3), Alphabet(2), {"a"},
                                 {bsc_pair(0.5, 0.1, 0.2)}),
                  SpecError);
  const CompoundSource src = two_states(0.5, 0.3);
  CHECK(src.state_index("b") == 1);
  CHECK_THROWS_AS(src.state_index("c"), SpecError);
}

TEST_CASE("marginal partition groups states by X-marginal") {
  const CompoundSource same = two_states(0.5, 0.5);
  CHECK(marginal_partition(same).size() == 1);
  CHECK(marginal_partition(same)[0].members == std::vector<int>{0, 1});
  const CompoundSource close = two_states(0.5, 0.5 + 5e-11);
  CHECK(marginal_partition(close).size() == 1);
  const CompoundSource apart = two_states(0.5, 0.5 + 1e-8);
  const auto classes = marginal_partition(apart);
  REQUIRE(classes.size() == 2);
  CHECK(classes[1].members == std::vector<int>{1});
}

TEST_CASE("sampled blocks follow the state law") {
  const CompoundSource src = two_states(0.5, 0.2);
  const SampleBlock b = sample_block(src, "b", 20000, 99);
  const Eigen::VectorXi c = type_counts(b.x, 2);
  CHECK(c(1) / 20000.0 == doctest::Approx(0.2).epsilon(0.05));
  int flips = 0;
  for (int i = 0; i < 20000; ++i) flips += b.x[i] != b.y[i];
  CHECK(flips / 20000.0 == doctest::Approx(0.1).epsilon(0.1));
  // Same seed, same block.
  CHECK(sample_block(src, 1, 50, 3).z == sample_block(src, 1, 50, 3).z);
}

TEST_CASE("product source multiplies letters, first letter least significant") {
  const CompoundSource src = two_states(0.5, 0.2);
  const CompoundSource p2 = product_source(src, 2);
  CHECK(p2.x_size() == 4);
  const JointPmf& j = src.joint(1);
  // block x = 1 means letters (1, 0); y = 2 means (0, 1); z = 3 means (1, 1).
  CHECK(p2.joint(1)(1, 2, 3) == doctest::Approx(j(1, 0, 1) * j(0, 1, 1)).epsilon(1e-14));
  CHECK(mutual_information(p2.xy(0)) == doctest::Approx(2 * mutual_information(src.xy(0))).epsilon(1e-12));
  CHECK_THROWS_AS(product_source(src, 5), BudgetError);
}

TEST_CASE("degradedness of a cascade and of its reverse") {
  // Z = BSC(0.15)(Y): degraded with witness BSC(0.15).
  Eigen::VectorXd m(8);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int z = 0; z < 2; ++z)
        m((x * 2 + y) * 2 + z) = 0.5 * (y == x ? 0.9 : 0.1) * (z == y ? 0.85 : 0.15);
  const CompoundSource cascade(Alphabet(2), Alphabet(2), Alphabet(2), {"s"}, {JointPmf({2, 2, 2}, m)});
  const DegradednessReport r = check_degraded(cascade);
  CHECK(r.degraded);
  REQUIRE(r.pairs.size() == 1);
  REQUIRE(r.pairs[0].witness);
  CHECK(r.pairs[0].witness->matrix()(0, 1) == doctest::Approx(0.15).epsilon(1e-9));

  // Eve sees X exactly and Bob through BSC(0.1): not degraded.
  Eigen::VectorXd m2 = Eigen::VectorXd::Zero(8);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) m2((x * 2 + y) * 2 + x) = 0.5 * (y == x ? 0.9 : 0.1);
  const CompoundSource reverse(Alphabet(2), Alphabet(2), Alphabet(2), {"s"}, {JointPmf({2, 2, 2}, m2)});
  CHECK_FALSE(check_degraded(reverse).degraded);
}

TEST_CASE("auxiliary joints respect U - V - X") {
  const CompoundSource src = two_states(0.3, 0.3);
  Eigen::Matrix2d vx, uv;
  vx << 0.8, 0.2, 0.3, 0.7;
  uv << 0.6, 0.4, 0.1, 0.9;
  const AuxChannelPair aux{Channel(vx), Channel(uv)};
  const JointPmf j = aux_joint(src.joint(0), aux);
  CHECK(j.rank() == 5);
  CHECK(conditional_mutual_information(j, {kAuxU}, {kAuxX, kAuxY, kAuxZ}, {kAuxV}) ==
        doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
  CHECK(conditional_mutual_information(j, {kAuxV}, {kAuxY, kAuxZ}, {kAuxX}) ==
        doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
  const AuxChannelPair single = AuxChannelPair::single_layer(Channel(uv));
  CHECK(single.v_size() == 2);
  CHECK(single.u_size() == 2);
  CHECK(AuxChannelPair::constant_u(Channel(vx)).u_size() == 1);
}

TEST_CASE("maximum-likelihood marginal estimation") {
  const CompoundSource src = two_states(0.3, 0.7);
  const auto classes = marginal_partition(src);
  CHECK(estimate_marginal(Sequence{0, 0, 1, 0}, classes).estimated_class == 0);
  CHECK(estimate_marginal(Sequence{1, 1, 1, 0}, classes).estimated_class == 1);
  // Exact tie goes to the lower class index.
  const CompoundSource quarter = two_states(0.25, 0.75);
  CHECK(estimate_marginal(Sequence{1, 0}, marginal_partition(quarter)).estimated_class == 0);

  const JointPmf zero_one({2, 1, 1}, Eigen::Vector2d(1.0, 0.0));
  const JointPmf half({2, 1, 1}, Eigen::Vector2d(0.5, 0.5));
  const CompoundSource sparse(Alphabet(2), Alphabet(1), Alphabet(1), {"p", "q"}, {zero_one, half});
  const auto sc = marginal_partition(sparse);
  CHECK(estimate_marginal(Sequence{0, 0, 0}, sc).estimated_class == 0);
  CHECK(estimate_marginal(Sequence{0, 1, 0}, sc).estimated_class == 1);
  const JointPmf only_zero({2, 1, 1}, Eigen::Vector2d(1.0, 0.0));
  const CompoundSource dead(Alphabet(2), Alphabet(1), Alphabet(1), {"p"}, {only_zero});
  CHECK_THROWS_AS(estimate_marginal(Sequence{1}, marginal_partition(dead)), NoAdmissibleClass);
}

TEST_CASE("estimation error curve decays") {
  const CompoundSource src = two_states(0.3, 0.7);
  const ErrorCurve c = estimate_error_curve(src, 0, {5, 15}, 20000, 1);
  REQUIRE(c.points.size() == 2);
  // n = 5 errs when at least 3 ones (ties at n even only): binomial tail 0.16308.
  CHECK(c.points[0].rate == doctest::Approx(0.16308).epsilon(0.05));
  CHECK(c.points[1].rate < c.points[0].rate);
}
