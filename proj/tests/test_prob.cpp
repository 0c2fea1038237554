#include "doctest.h"
#include "skg/prob.hpp"
#include "skg/errors.hpp"

using namespace skg;

TEST_CASE("entropy of small distributions") {
  CHECK(entropy(Pmf(Eigen::Vector3d(0.5, 0.25, 0.25))) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(entropy(Pmf::uniform(8)) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(entropy(Pmf::point(4, 2)) == 0.0);
  CHECK(binary_entropy(0.11) == doctest::Approx(0.499915958164528).epsilon(1e-13));
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
}

TEST_CASE("pmf validation") {
  CHECK_THROWS_AS(Pmf(Eigen::Vector2d(0.6, 0.6)), SpecError);
  CHECK_THROWS_AS(Pmf(Eigen::Vector2d(1.1, -0.1)), SpecError);
  CHECK_NOTHROW(Pmf(Eigen::Vector2d(1.0 + 5e-13, -5e-13)));
  CHECK_THROWS_AS(JointPmf({2, 2}, Eigen::Vector3d(0.2, 0.3, 0.5)), SpecError);
}

TEST_CASE("mutual information of a uniform BSC(0.1)") {
  Eigen::Matrix2d w;
  w << 0.9, 0.1, 0.1, 0.9;
  const JointPmf xy = compose(Pmf::uniform(2), Channel(w));
  CHECK(mutual_information(xy) == doctest::Approx(0.5310044064107188).epsilon(1e-13));
  CHECK(mutual_information(xy, {0}, {1}) == doctest::Approx(mutual_information(xy)));
  const Channel back = conditional(xy);
  CHECK((back.matrix() - w).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("chain rule holds on random rank-3 joints") {
  std::srand(7);
  for (int t = 0; t < 50; ++t) {
    Eigen::VectorXd m = Eigen::VectorXd::Random(2 * 3 * 2).cwiseAbs();
    m /= m.sum();
    const JointPmf j({2, 3, 2}, m);
    const double hxyz = entropy(j);
    const double hx = entropy(marginal(j, 0));
    const double hy_x = conditional_entropy(j, {1}, {0});
    const double hz_xy = conditional_entropy(j, {2}, {0, 1});
    CHECK(hxyz == doctest::Approx(hx + hy_x + hz_xy).epsilon(1e-12));
    // I(X;YZ) = I(X;Z) + I(X;Y|Z)
    const double lhs = mutual_information(j, {0}, {1, 2});
    const double rhs = mutual_information(j, {0}, {2}) + conditional_mutual_information(j, {0}, {1}, {2});
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    CHECK(mutual_information(j, {0}, {1, 2}) >= -1e-15);
  }
}

TEST_CASE("marginalize keeps the listed components in order") {
  Eigen::VectorXd m(8);
  m << 0.05, 0.1, 0.15, 0.2, 0.1, 0.1, 0.2, 0.1;
  const JointPmf j({2, 2, 2}, m);
  const JointPmf xz = marginalize(j, {0, 2});
  CHECK(xz(0, 0) == doctest::Approx(0.2));
  CHECK(xz(0, 1) == doctest::Approx(0.3));
  CHECK(xz(1, 0) == doctest::Approx(0.3));
  CHECK(xz(1, 1) == doctest::Approx(0.2));
  CHECK(marginal(j, 1)(0) == doctest::Approx(0.35));
}

TEST_CASE("variational distance is the full l1 norm") {
  const Pmf p(Eigen::Vector3d(0.5, 0.5, 0.0)), q(Eigen::Vector3d(0.25, 0.25, 0.5));
  CHECK(variational_distance(p, q) == doctest::Approx(1.0));
  CHECK(variational_distance(p, p) == 0.0);
}

TEST_CASE("kronecker product of channels") {
  Eigen::Matrix2d a;
  a << 0.9, 0.1, 0.2, 0.8;
  const Channel k = kronecker(Channel(a), Channel::identity(2));
  CHECK(k.inputs() == 4);
  CHECK(k.outputs() == 4);
  CHECK(k.matrix()(1, 3) == doctest::Approx(0.1));
  CHECK(k.matrix()(2, 0) == doctest::Approx(0.2));
  CHECK(k.matrix()(0, 1) == 0.0);
}
