#include <cmath>
#include <random>

#include "doctest.h"
#include "skg/errors.hpp"
#include "skg/packed.hpp"
#include "skg/typicality.hpp"

using namespace skg;

namespace {

Sequence from_index(long idx, int alphabet, int n) {
  Sequence s(n);
  for (int t = 0; t < n; ++t) {
    s[t] = static_cast<Symbol>(idx % alphabet);
    idx /= alphabet;
  }
  return s;
}

}  // namespace

TEST_CASE("count windows") {
  const CountWindow w = make_count_window(Eigen::Vector3d(0.7, 0.3, 0.0), 10, 0.1);
  CHECK(w.lo == std::vector<int>{6, 2, 0});
  CHECK(w.hi == std::vector<int>{8, 4, 0});
  // Boundary hits exactly n*eps away are admissible.
  const CountWindow e = make_count_window(Eigen::Vector2d(0.5, 0.5), 14, 1.0 / 14.0);
  CHECK(e.lo == std::vector<int>{6, 6});
  CHECK(e.hi == std::vector<int>{8, 8});
  CHECK_THROWS_AS(make_count_window(Eigen::Vector2d(0.5, 0.5), 4, 0.0), DomainError);
}

TEST_CASE("typical probability of Bernoulli(0.3)") {
  const Pmf p(Eigen::Vector2d(0.7, 0.3));
  const TypicalProbability t = typical_probability(p, 10, 0.1);
  CHECK(t.exact == doctest::Approx(0.7004233214999996).epsilon(1e-12));
  CHECK(t.bound == doctest::Approx(1.0 - 4.0 * std::exp(-0.2)).epsilon(1e-14));
}

TEST_CASE("typical set size by counting") {
  const Pmf p(Eigen::Vector2d(0.7, 0.3));
  // 2..4 ones out of 10: 45 + 120 + 210 sequences.
  const TypicalSetSize s = typical_set_size_bounds(p, 10, 0.1, 0.5);
  CHECK(s.log2_size == doctest::Approx(std::log2(375.0)).epsilon(1e-12));
  CHECK(s.within);
}

TEST_CASE("weighted compositions") {
  const std::vector<int> lo{0, 0}, hi{4, 4};
  const std::vector<double> flat{0.0, 0.0}, half{std::log(0.5), std::log(0.5)};
  CHECK(log2_weighted_compositions(4, lo, hi, flat) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(log2_weighted_compositions(4, lo, hi, half) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  const std::vector<int> lo2{3, 0}, hi2{4, 0};
  CHECK(log2_weighted_compositions(4, lo2, hi2, flat) == doctest::Approx(0.0).scale(1.0));
  const std::vector<int> lo3{0, 0}, hi3{1, 1};
  CHECK(std::isinf(log2_weighted_compositions(4, lo3, hi3, flat)));
}

TEST_CASE("packed joint typicality agrees with the direct check") {
  std::mt19937_64 gen(11);
  Eigen::VectorXd m(6);
  m << 0.3, 0.1, 0.05, 0.15, 0.25, 0.15;
  const JointPmf joint({2, 3}, m);
  for (int n : {7, 64, 100}) {
    const CountWindow w = make_count_window(joint.mass(), n, 0.08);
    const PackedTypicality packed({2, 3}, w, n);
    int agree = 0, hits = 0;
    for (int t = 0; t < 400; ++t) {
      Sequence a(n), b(n);
      for (int i = 0; i < n; ++i) {
        const double r = std::uniform_real_distribution<double>(0, 1)(gen);
        double acc = 0.0;
        int cell = 5;
        for (int c = 0; c < 6; ++c) {
          acc += m(c);
          if (r < acc) {
            cell = c;
            break;
          }
        }
        a[i] = static_cast<Symbol>(cell / 3);
        b[i] = static_cast<Symbol>(cell % 3);
      }
      if (t % 3 == 0) std::shuffle(b.begin(), b.end(), gen);
      const SeqView views[] = {a, b};
      const bool direct = is_jointly_typical(views, joint, 0.08);
      const auto pa = pack_sequence(a, 2);
      const auto pb = pack_sequence(b, 3);
      const std::uint64_t* planes[] = {pa.data(), pb.data()};
      if (packed(planes) == direct) ++agree;
      if (direct) ++hits;
      CHECK(unpack_sequence(pb.data(), 3, n) == b);
    }
    CHECK(agree == 400);
    CHECK(hits > 0);
  }
}

TEST_CASE("joint section size matches enumeration") {
  // (U,X) joint with U|X = BSC(0.25), X uniform; x fixed with three ones.
  Eigen::Vector4d m(0.375, 0.125, 0.125, 0.375);
  const JointPmf ux({2, 2}, m);
  const int n = 8;
  const Sequence x = {1, 1, 1, 0, 0, 0, 0, 0};
  const SeqView fixed[] = {x};
  long count = 0;
  for (long idx = 0; idx < (1L << n); ++idx) {
    const Sequence u = from_index(idx, 2, n);
    const SeqView both[] = {u, x};
    if (is_jointly_typical(both, ux, 0.13)) ++count;
  }
  // (C(5,3) + C(5,4)) * (C(3,2) + C(3,3)) completions.
  CHECK(count == 60);
  CHECK(joint_section_log2_size(ux, 0, fixed, 0.13) ==
        doctest::Approx(std::log2(60.0)).epsilon(1e-12));
  CHECK(joint_section_nonempty(ux, 0, fixed, 0.13));
  const Sequence all_ones(n, 1);
  const SeqView bad[] = {all_ones};
  CHECK_FALSE(joint_section_nonempty(ux, 0, bad, 0.13));
  CHECK(std::isinf(joint_section_log2_size(ux, 0, bad, 0.13)));
}

TEST_CASE("conditional typical set membership") {
  Eigen::Matrix2d w;
  w << 0.75, 0.25, 0.25, 0.75;
  const Sequence x = {0, 0, 0, 0, 1, 1, 1, 1};
  const ConditionalTypicalSet set = conditional_typical_set(x, Channel(w), 0.1);
  // Three of four zeros kept and three of four ones kept: exact conditional type.
  CHECK(set.contains(Sequence{0, 0, 0, 1, 1, 1, 1, 0}));
  // Every symbol flipped.
  CHECK_FALSE(set.contains(Sequence{1, 1, 1, 1, 0, 0, 0, 0}));
  Eigen::Matrix2d det;
  det << 1.0, 0.0, 0.0, 1.0;
  const ConditionalTypicalSet id = conditional_typical_set(x, Channel(det), 0.3);
  CHECK(id.contains(x));
  CHECK_FALSE(id.contains(Sequence{1, 0, 0, 0, 1, 1, 1, 1}));
}

TEST_CASE("typicality parameters") {
  CHECK_NOTHROW(TypicalityParams{0.01, 0.02, 0.03, 0.04}.validate());
  CHECK_THROWS_AS((TypicalityParams{0.02, 0.02, 0.03, 0.04}.validate()), SpecError);
  const TypicalityParams d = TypicalityParams::scaled_defaults(0.2);
  CHECK(d.xi == doctest::Approx(0.01));
  CHECK(d.vartheta == doctest::Approx(0.04));
}
