#include <cmath>

#include "doctest.h"
#include "skg/errors.hpp"
#include "skg/io.hpp"
#include "skg/rng.hpp"

using namespace skg;

namespace {

const std::string kSpecDir = SKG_SPEC_DIR;

// X uniform; Y = BSC(py)(X); Z = BSC(pz)(Y).
JointPmf cascade(double py, double pz) {
  Eigen::VectorXd m(8);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int z = 0; z < 2; ++z)
        m((x * 2 + y) * 2 + z) = 0.5 * (y == x ? 1 - py : py) * (z == y ? 1 - pz : pz);
  return JointPmf({2, 2, 2}, m);
}

CompoundSource single(const JointPmf& j) {
  return CompoundSource(Alphabet(j.dim(0)), Alphabet(j.dim(1)), Alphabet(j.dim(2)), {"s"}, {j});
}

Channel bsc(double a) {
  Eigen::Matrix2d w;
  w << 1 - a, a, a, 1 - a;
  return Channel(w);
}

}  // namespace

TEST_CASE("degraded capacity of simple sources") {
  // Bob sees X, Eve sees a constant.
  const JointPmf clean({2, 2, 1}, Eigen::Vector4d(0.5, 0.0, 0.0, 0.5));
  const DegradedCapacity c = degraded_capacity(single(clean));
  CHECK(c.value == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(c.degraded);
  // Eve sees Bob's output: nothing left.
  CHECK(degraded_capacity(single(cascade(0.1, 0.0))).value ==
        doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  // BSC cascade: h(0.1 * 0.85 + 0.9 * 0.15) - h(0.1).
  CHECK(degraded_capacity(single(cascade(0.1, 0.15))).value ==
        doctest::Approx(binary_entropy(0.22) - binary_entropy(0.1)).epsilon(1e-13));
}

TEST_CASE("a better eavesdropper clamps the capacity formula") {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(8);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) m((x * 2 + y) * 2 + x) = 0.5 * (y == x ? 0.9 : 0.1);
  const DegradedCapacity c = degraded_capacity(single(JointPmf({2, 2, 2}, m)));
  CHECK(c.value == 0.0);
  CHECK(c.clamped);
  CHECK(c.raw == doctest::Approx(-binary_entropy(0.1)).epsilon(1e-13));
  CHECK_FALSE(c.degraded);
  CHECK(c.flags.size() == 2);
}

TEST_CASE("information terms match direct evaluation") {
  const CompoundSource src = load_source_spec(kSpecDir + "/parallel_bsc.json");
  Rng rng(3);
  for (int t = 0; t < 10; ++t) {
    Eigen::MatrixXd vx(2, 3), uv(3, 2);
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 3; ++c) vx(r, c) = rng.uniform() + 0.01;
      vx.row(r) /= vx.row(r).sum();
    }
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 2; ++c) uv(r, c) = rng.uniform() + 0.01;
      uv.row(r) /= uv.row(r).sum();
    }
    const AuxChannelPair aux{Channel(vx), Channel(uv)};
    const AuxTerms terms = aux_terms(src, {0, 1}, aux);
    double min_vy = 1e9, max_vz = -1e9, max_ux = -1e9, max_vx = -1e9;
    for (int s = 0; s < 2; ++s) {
      const JointPmf j = aux_joint(src.joint(s), aux);
      min_vy = std::min(min_vy, conditional_mutual_information(j, {kAuxV}, {kAuxY}, {kAuxU}));
      max_vz = std::max(max_vz, conditional_mutual_information(j, {kAuxV}, {kAuxZ}, {kAuxU}));
      max_ux = std::max(max_ux, conditional_mutual_information(j, {kAuxU}, {kAuxX}, {kAuxY}));
      max_vx = std::max(max_vx, conditional_mutual_information(j, {kAuxV}, {kAuxX}, {kAuxU, kAuxY}));
    }
    CHECK(terms.min_i_vy_given_u == doctest::Approx(min_vy).epsilon(1e-12));
    CHECK(terms.max_i_vz_given_u == doctest::Approx(max_vz).epsilon(1e-12));
    CHECK(terms.max_i_ux_given_y == doctest::Approx(max_ux).epsilon(1e-12));
    CHECK(terms.max_i_vx_given_uy == doctest::Approx(max_vx).epsilon(1e-12));
  }
}

TEST_CASE("lower bound is monotone in the public rate limit and below capacity") {
  const CompoundSource src = load_source_spec(kSpecDir + "/bsc_cascade.json");
  const double cap = degraded_capacity(src).value;
  SearchConfig cfg;
  cfg.grid = 16;
  double prev = -1.0;
  for (double g : {0.05, 0.2, 0.5, 1.0, kInfiniteGamma}) {
    const RateReport r = secret_key_lower_bound(src, g, 2, 2, cfg);
    CHECK(r.value >= prev - 1e-12);
    CHECK(r.value <= cap + 1e-9);
    prev = r.value;
  }
  CHECK(prev == doctest::Approx(cap).epsilon(1e-9));
}

TEST_CASE("a tiny public rate limit is infeasible unless U and V are constant") {
  const CompoundSource src = single(cascade(0.1, 0.15));
  SearchConfig cfg;
  cfg.grid = 8;
  const RateReport r = secret_key_lower_bound(src, 1e-6, 1, 2, cfg);
  // V must carry no information beyond what Y already has about X.
  CHECK(r.value <= 1e-6);
}

TEST_CASE("multi-letter rate is at least the single-letter rate") {
  const CompoundSource src = load_source_spec(kSpecDir + "/parallel_bsc.json");
  SearchConfig cfg;
  cfg.grid = 8;
  const MultiLetterRate r = multi_letter_rate(src, 2, 1, 2, cfg);
  CHECK(r.a_n >= 2 * r.single_letter.value - 1e-12);
  CHECK(r.value == doctest::Approx(r.a_n / 2));
  CHECK_THROWS_AS(multi_letter_rate(src, 5, 1, 2, cfg), BudgetError);
}

TEST_CASE("continuity bound values") {
  CHECK(mi_continuity_bound(0.01, 2, 2) == doctest::Approx(0.2899282827093682).epsilon(1e-13));
  CHECK(mi_continuity_bound(0.0, 3, 3) == 0.0);
  CHECK_THROWS_AS(mi_continuity_bound(0.8, 2, 2), DomainError);
  CHECK_THROWS_AS(mi_continuity_bound(-0.1, 2, 2), DomainError);
}

TEST_CASE("quantisation leaves lattice channels alone and enforces l >= 2|U|^2") {
  Eigen::MatrixXd w(2, 3);
  w << 0.25, 0.5, 0.25, 0.125, 0.125, 0.75;
  const QuantizedFamily q = quantize_family({Channel(w), Channel(w)}, 64);
  CHECK(q.net.size() == 1);
  CHECK(q.assignment == std::vector<int>{0, 0});
  CHECK(q.max_abs_diff == 0.0);
  CHECK((q.net[0].matrix() - w).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(quantize_family({Channel(w)}, 17), DomainError);
}

TEST_CASE("quantisation rounds off-lattice rows within the bounds") {
  Eigen::MatrixXd w(1, 2);
  w << 1.0 / 3.0, 2.0 / 3.0;
  const QuantizedFamily q = quantize_family({Channel(w)}, 8);
  const Eigen::MatrixXd& r = q.net[0].matrix();
  CHECK(r.sum() == doctest::Approx(1.0));
  CHECK(std::abs(r(0, 0) * 8 - std::round(r(0, 0) * 8)) < 1e-12);
  CHECK(q.max_abs_diff <= 2.0 / 8 + 1e-12);
  CHECK(q.max_ratio <= q.ratio_limit);
}

TEST_CASE("converse identity holds on degraded pairs only") {
  const CompoundSource src = load_source_spec(kSpecDir + "/bsc_cascade.json");
  const ConverseIdentityReport r = converse_identity_check(src);
  CHECK(r.degraded);
  CHECK(r.entries.size() == 4);
  CHECK(r.max_error < 1e-12);

  Eigen::VectorXd m = Eigen::VectorXd::Zero(8);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) m((x * 2 + y) * 2 + x) = 0.5 * (y == x ? 0.9 : 0.1);
  const ConverseIdentityReport bad = converse_identity_check(single(JointPmf({2, 2, 2}, m)));
  CHECK_FALSE(bad.degraded);
  for (const auto& e : bad.entries) CHECK_FALSE(e.checked);
}

TEST_CASE("key size for a target rate") {
  CHECK(key_size_for_rate(10, 0.1) == 2);
  CHECK(key_size_for_rate(10, 0.15) == 3);
  CHECK(key_size_for_rate(200, 0.0305915) == 70);
  CHECK(key_size_for_rate(5, 0.0) == 1);
  CHECK_THROWS_AS(key_size_for_rate(100, 0.5), BudgetError);
}
