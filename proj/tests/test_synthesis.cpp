#include "synckit/synthesis.hpp"

#include "synckit/errors.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace synckit;
using synckit::testing::Rng;

namespace {

Mat rotation_generator(double omega) {
  Mat m(2, 2);
  m << 0.0, omega, -omega, 0.0;
  return m;
}

SystemPair oscillator_pair() {
  Mat c(1, 2);
  c << 0, 1;
  return SystemPair(c, rotation_generator(1.0));
}

}  // namespace

TEST_SUITE("synthesis") {

TEST_CASE("gram of the zero block is the identity weight") {
  const auto ng = neutral_gram(Mat::Zero(1, 1), 1e-8, 1e-8);
  CHECK(ng.gram(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ng.residual <= 1e-12);
}

TEST_CASE("gram of a pure rotation is the identity") {
  const auto ng = neutral_gram(rotation_generator(2.0), 1e-8, 1e-8);
  CHECK((ng.gram - Mat::Identity(2, 2)).norm() <= 1e-10);
}

TEST_CASE("gram of a skewed rotation matches the hand-derived limit") {
  Mat f(2, 2);
  f << 0.0, 0.5, -2.0, 0.0;  // diag(1,2) conjugate of the unit rotation
  const auto ng = neutral_gram(f, 1e-8, 1e-8);
  Mat expected(2, 2);
  expected << 2.5, 0.0, 0.0, 0.625;
  CHECK((ng.gram - expected).norm() <= 1e-8);
  CHECK((ng.gram - testing::gram_oracle(f)).norm() <= 1e-6);
  CHECK(ng.residual <= 1e-8 * ng.gram.norm());
}

TEST_CASE("gram rejects off-axis blocks") {
  CHECK_THROWS_AS(neutral_gram(Mat::Constant(1, 1, -1.0), 1e-8, 1e-8),
                  PreconditionError);
}

TEST_CASE("gram properties on random on-axis blocks") {
  Rng rng(83);
  for (int trial = 0; trial < 7; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 6);  // odd dims carry a zero mode
    const Mat f = testing::random_onaxis_matrix(rng, n);
    const auto ng = neutral_gram(f, 1e-8, default_eig_tol(f));
    CHECK(ng.residual <= 1e-8 * std::max(1.0, ng.gram.norm()));
    Eigen::SelfAdjointEigenSolver<Mat> es(ng.gram);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("zero gain for stable dynamics") {
  const auto gain = synth_hurwitz(SystemPair(Mat::Ones(1, 1), -Mat::Ones(1, 1)));
  CHECK(gain.L.norm() == 0.0);
  CHECK(gain.branch == GainBranch::hurwitz_zero);
  CHECK(gain.guarantee == GuaranteeSet::all);

  Mat c(1, 2);
  c << 1, 0;
  Mat a = Mat::Zero(2, 2);
  a(0, 0) = -1;
  a(1, 1) = -2;
  CHECK(synth_hurwitz(SystemPair(c, a)).L.norm() == 0.0);
  CHECK_THROWS_AS(synth_hurwitz(oscillator_pair()), PreconditionError);
}

TEST_CASE("axis-gram gain for the oscillator pair") {
  const auto gain = synth_algorithm1(oscillator_pair());
  Mat expected(2, 1);
  expected << 0, 1;
  CHECK((gain.L - expected).norm() <= 1e-10);
  CHECK(gain.branch == GainBranch::algorithm1);
  CHECK(gain.guarantee == GuaranteeSet::connected);
  CHECK(gain.diagnostics.center_dim == 2);
  // resulting coupling matches the velocity-coupled oscillator array
  const Mat coupling = gain.L * oscillator_pair().C;
  Mat expected_coupling = Mat::Zero(2, 2);
  expected_coupling(1, 1) = 1.0;
  CHECK((coupling - expected_coupling).norm() <= 1e-10);
}

TEST_CASE("axis-gram gain for the single integrator") {
  const auto gain = synth_algorithm1(SystemPair(Mat::Ones(1, 1), Mat::Zero(1, 1)));
  CHECK(gain.L(0, 0) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("axis-gram gain is exactly zero without an axis part") {
  Mat c(1, 2);
  c << 1, 0;
  Mat a = Mat::Zero(2, 2);
  a(0, 0) = -1;
  a(1, 1) = -2;
  const auto gain = synth_algorithm1(SystemPair(c, a));
  CHECK(gain.L.norm() == 0.0);
  CHECK(gain.diagnostics.center_dim == 0);
}

TEST_CASE("axis-gram gain preconditions") {
  Mat c(1, 2);
  c << 1, 0;
  Mat dint(2, 2);
  dint << 0, 1, 0, 0;
  CHECK_THROWS_AS(synth_algorithm1(SystemPair(c, dint)), PreconditionError);
  CHECK_THROWS_AS(synth_algorithm1(SystemPair(Mat::Zero(1, 1), Mat::Zero(1, 1))),
                  PreconditionError);
}

TEST_CASE("axis-gram gain columns stay in the axis subspace") {
  Rng rng(89);
  for (int trial = 0; trial < 8; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 4);
    const int axis = 2 * (1 + static_cast<int>(rng() % (n / 2)));
    const Mat a = testing::random_neutrally_stable(rng, n, axis);
    const int m = 1 + static_cast<int>(rng() % n);
    Mat c = testing::random_mat(rng, m, n);
    const SystemPair pair(c, a);
    if (!is_detectable(pair, default_eig_tol(a))) continue;
    const auto gain = synth_algorithm1(pair);
    const Mat u = split_center_stable(a, default_eig_tol(a)).center_basis;
    CHECK(((Mat::Identity(n, n) - u * u.transpose()) * gain.L).norm() <=
          1e-8 * (1.0 + gain.L.norm()));
    if (gain.diagnostics.center_dim == n) {
      // with a full axis part, C L is a Gram quadratic form: symmetric psd
      const Mat cl = c * gain.L;
      CHECK((cl - cl.transpose()).norm() <= 1e-9 * (1.0 + cl.norm()));
      Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (cl + cl.transpose()));
      CHECK(es.eigenvalues().minCoeff() >= -1e-9);
    }
  }
}

TEST_CASE("full-state gain inverts the output map") {
  const auto gain = synth_fullstate(SystemPair(Mat::Identity(2, 2), -Mat::Identity(2, 2)));
  CHECK((gain.L - Mat::Identity(2, 2)).norm() <= 1e-12);
  CHECK(gain.branch == GainBranch::fullstate_pinv);

  Mat c(2, 1);
  c << 1, 1;
  const auto tall = synth_fullstate(SystemPair(c, Mat::Zero(1, 1)));
  CHECK(tall.L(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(tall.L(0, 1) == doctest::Approx(0.5).epsilon(1e-12));

  Mat wide(1, 2);
  wide << 1, 0;
  CHECK_THROWS_AS(synth_fullstate(SystemPair(wide, Mat::Zero(2, 2))),
                  PreconditionError);
  CHECK_THROWS_AS(synth_fullstate(SystemPair(Mat::Ones(1, 1), Mat::Ones(1, 1))),
                  PreconditionError);
}

TEST_CASE("full-state gain residual on random tall output maps") {
  Rng rng(97);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const int m = n + static_cast<int>(rng() % 3);
    const Mat c = testing::random_mat(rng, m, n);
    const SystemPair pair(c, testing::random_neutrally_stable(rng, n, 0));
    if (numerical_rank(c) < n) continue;
    const auto gain = synth_fullstate(pair);
    CHECK((gain.L * c - Mat::Identity(n, n)).norm() <= 1e-10);
  }
}

TEST_CASE("riccati gain closed forms") {
  const SystemPair integrator(Mat::Ones(1, 1), Mat::Zero(1, 1));
  CHECK(synth_riccati(integrator, 1.0).L(0, 0) ==
        doctest::Approx(1.0).epsilon(1e-10));
  CHECK(synth_riccati(integrator, 0.5).L(0, 0) ==
        doctest::Approx(2.0).epsilon(1e-10));

  const SystemPair unstable(Mat::Ones(1, 1), Mat::Ones(1, 1));
  CHECK(synth_riccati(unstable, 1.0).L(0, 0) ==
        doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-10));

  for (double a : {0.0, 0.5, 1.0, 2.0}) {
    const SystemPair scalar(Mat::Ones(1, 1), Mat::Constant(1, 1, a));
    CHECK(synth_riccati(scalar, 1.0).L(0, 0) ==
          doctest::Approx(a + std::sqrt(a * a + 1.0)).epsilon(1e-10));
  }

  CHECK_THROWS_AS(synth_riccati(integrator, 0.0), ValidationError);
  CHECK_THROWS_AS(synth_riccati(integrator, -1.0), ValidationError);
  CHECK_THROWS_AS(
      synth_riccati(SystemPair(Mat::Zero(1, 1), Mat::Ones(1, 1)), 1.0),
      NoStabilizingSolutionError);
}

TEST_CASE("dispatch picks the widest applicable guarantee") {
  Mat c01(1, 2);
  c01 << 1, 0;
  Mat dint(2, 2);
  dint << 0, 1, 0, 0;

  const auto hurwitz = synth_auto(SystemPair(Mat::Ones(1, 1), -Mat::Ones(1, 1)));
  CHECK(hurwitz.branch == GainBranch::hurwitz_zero);
  CHECK(hurwitz.guarantee == GuaranteeSet::all);

  const auto osc = synth_auto(oscillator_pair());
  CHECK(osc.branch == GainBranch::algorithm1);
  CHECK(osc.guarantee == GuaranteeSet::connected);

  const auto fullstate = synth_auto(SystemPair(Mat::Identity(2, 2), dint));
  CHECK(fullstate.branch == GainBranch::fullstate_pinv);
  CHECK(fullstate.guarantee == GuaranteeSet::connected);

  CHECK_THROWS_AS(synth_auto(SystemPair(c01, dint)), NoGuaranteeError);
  const auto riccati = synth_auto(SystemPair(c01, dint), 1.0);
  CHECK(riccati.branch == GainBranch::riccati_delta);
  CHECK(riccati.guarantee == GuaranteeSet::min_coupling);
  CHECK(riccati.delta == 1.0);

  CHECK_THROWS_AS(synth_auto(SystemPair(Mat::Zero(1, 1), Mat::Zero(1, 1)), 5.0),
                  NoGuaranteeError);
}

TEST_CASE("dispatch is deterministic") {
  const auto first = synth_auto(oscillator_pair());
  const auto second = synth_auto(oscillator_pair());
  CHECK(first.branch == second.branch);
  CHECK((first.L - second.L).norm() == 0.0);
}

TEST_CASE("dual gains transpose the synthesized gain") {
  const auto single = dualize(Mat::Zero(1, 1), Mat::Ones(1, 1));
  CHECK(single.K(0, 0) == doctest::Approx(1.0).epsilon(1e-10));

  Mat b(2, 1);
  b << 0, 1;
  const auto osc = dualize(rotation_generator(1.0), b);
  Mat expected(1, 2);
  expected << 0, 1;
  CHECK((osc.K - expected).norm() <= 1e-10);
  CHECK(osc.branch == GainBranch::algorithm1);

  CHECK_THROWS_AS(dualize(Mat::Ones(1, 1), Mat::Zero(1, 1)), NoGuaranteeError);
}

}  // TEST_SUITE
