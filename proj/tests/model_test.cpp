#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "stigma/model.hpp"
#include "stigma/rng.hpp"

using namespace stigma;

TEST_CASE("stage payoffs cover the whole action matrix") {
  const ModelParams params(0.4, 1.5, 0.0);
  const StagePayoffs cc = stage_payoffs(Action::Cooperate, Action::Cooperate, 0.3, 0.7, params);
  CHECK(cc.row_payoff == 1.0);
  CHECK(cc.col_payoff == 1.0);
  const StagePayoffs dd = stage_payoffs(Action::Defect, Action::Defect, 0.3, 0.7, params);
  CHECK(dd.row_payoff == 0.0);
  CHECK(dd.col_payoff == 0.0);
  const StagePayoffs dc = stage_payoffs(Action::Defect, Action::Cooperate, 0.3, 0.7, params);
  CHECK(dc.row_payoff == 1.5);
  CHECK(dc.col_payoff == -0.7);
  const StagePayoffs cd = stage_payoffs(Action::Cooperate, Action::Defect, 0.3, 0.7, params);
  CHECK(cd.row_payoff == -0.3);
  CHECK(cd.col_payoff == 1.5);
  CHECK(stage_payoff(Action::Cooperate, Action::Defect, 0.3, params) == -0.3);
  CHECK(stage_payoff(Action::Defect, Action::Cooperate, 0.3, params) == 1.5);
}

TEST_CASE("parameter validation rejects out-of-range knobs") {
  CHECK_THROWS_AS(ModelParams(-0.1, 1.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ModelParams(1.1, 1.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ModelParams(0.4, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ModelParams(0.4, 0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ModelParams(0.4, 1.5, -0.2), std::invalid_argument);
  CHECK_THROWS_AS(ModelParams(0.4, 1.5, 1.0), std::invalid_argument);
  CHECK_NOTHROW(ModelParams(0.0, 1.5, 0.0));
  CHECK_NOTHROW(ModelParams(1.0, 1.5, 0.999));
  CHECK_THROWS_WITH(ModelParams(0.4, 1.0, 0.0),
                    doctest::Contains("b must exceed 1"));
  CHECK_THROWS_WITH(ModelParams(2.0, 1.5, 0.0),
                    doctest::Contains("pi must lie in [0, 1]"));
  CHECK_THROWS_WITH(ModelParams(0.4, 1.5, 1.0),
                    doctest::Contains("alpha must lie in [0, 1)"));
}

TEST_CASE("loss and cutoff arguments must stay in the unit interval") {
  const ModelParams params(0.4, 1.5, 0.0);
  CHECK_THROWS_AS(coop_payoff(-0.1, 0.5, params), std::invalid_argument);
  CHECK_THROWS_AS(coop_payoff(0.5, 1.5, params), std::invalid_argument);
  CHECK_THROWS_AS(defect_payoff(-0.2, params), std::invalid_argument);
  CHECK_THROWS_AS(meeting_coop_prob(1.1, params), std::invalid_argument);
}

TEST_CASE("meeting cooperation probability mixes honest and low-loss strategic mass") {
  const ModelParams params(0.4, 1.5, 0.0);
  CHECK(meeting_coop_prob(0.0, params) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(meeting_coop_prob(1.0, params) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(meeting_coop_prob(1.0 / 6.0, params) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("defection payoff: general form matches the erasure-free expansion") {
  // with no erasure the payoff collapses to [pi*(2-pi) + (1-pi)^2 * c] * b
  double worst = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double pi = i / 100.0;
    for (int j = 0; j <= 100; ++j) {
      const double c = j / 100.0;
      for (int k = 0; k < 10; ++k) {
        const double b = 1.1 + 0.3 * k;
        const ModelParams params(pi, b, 0.0);
        const double general = defect_payoff(c, params);
        const double expanded = (pi * (2.0 - pi) + (1.0 - pi) * (1.0 - pi) * c) * b;
        worst = std::max(worst, std::abs(general - expanded));
      }
    }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("defection payoff at the degenerate all-honest corner point") {
  // both algebraic forms land on 1.5 at (c, pi, b, alpha) = (1, 1, 1.5, 0)
  const ModelParams params(1.0, 1.5, 0.0);
  CHECK(defect_payoff(1.0, params) == doctest::Approx(1.5).epsilon(1e-15));
  const double expanded = (1.0 * (2.0 - 1.0) + 0.0) * 1.5;
  CHECK(expanded == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("cooperation payoff is affine in the own loss with slope -(1-pi)") {
  for (const double pi : {0.0, 0.25, 0.4, 0.8}) {
    const ModelParams params(pi, 1.5, 0.0);
    const double lo = coop_payoff(0.25, 0.3, params);
    const double hi = coop_payoff(0.75, 0.3, params);
    CHECK((hi - lo) / 0.5 == doctest::Approx(-(1.0 - pi)).epsilon(1e-12));
  }
}

TEST_CASE("cooperation payoff ignores the erasure probability") {
  const ModelParams base(0.4, 1.5, 0.0);
  const ModelParams forgiving(0.4, 1.5, 0.7);
  CHECK(coop_payoff(0.3, 0.6, base) == coop_payoff(0.3, 0.6, forgiving));
}

TEST_CASE("defection payoff rises with the believed cutoff") {
  SplitMix64 rng(2024);
  for (int i = 0; i < 200; ++i) {
    const double pi = rng.next_unit() * 0.99;
    const double b = 1.0 + rng.next_unit() * 2.5 + 1e-6;
    const double alpha = rng.next_unit() * 0.9;
    const ModelParams params(pi, b, alpha);
    const double c1 = rng.next_unit();
    const double c2 = rng.next_unit();
    const double lo = std::min(c1, c2);
    const double hi = std::max(c1, c2);
    CHECK(defect_payoff(lo, params) <= defect_payoff(hi, params) + 1e-15);
  }
}

TEST_CASE("indifference point for the headline parameterization") {
  const ModelParams params(0.4, 1.5, 0.0);
  const double cutoff = 1.0 / 6.0;
  CHECK(defect_payoff(cutoff, params) == doctest::Approx(1.05).epsilon(1e-12));
  CHECK(coop_payoff(cutoff, cutoff, params) == doctest::Approx(1.05).epsilon(1e-12));
}

TEST_CASE("uniform cost distribution clamps and inverts") {
  const CostDistribution uniform = CostDistribution::uniform();
  CHECK(uniform.is_uniform());
  CHECK(uniform.cdf(-0.5) == 0.0);
  CHECK(uniform.cdf(2.0) == 1.0);
  CHECK(uniform.cdf(0.3) == doctest::Approx(0.3).epsilon(1e-15));
  SplitMix64 a(7), b_rng(7);
  const double u = a.next_unit();
  CHECK(uniform.sample(b_rng) == u);
}

TEST_CASE("custom cost distributions are validated and inverted by bisection") {
  CHECK_THROWS_AS(CostDistribution::from_cdf("shifted", [](double) { return 0.2; }),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      CostDistribution::from_cdf("falling", [](double x) { return 1.0 - x; }),
      std::invalid_argument);
  const CostDistribution square =
      CostDistribution::from_cdf("square", [](double x) { return x * x; });
  CHECK(!square.is_uniform());
  CHECK(square.name() == "square");
  CHECK(square.cdf(0.5) == doctest::Approx(0.25).epsilon(1e-15));
  SplitMix64 a(11), b_rng(11);
  const double u = a.next_unit();
  const double s = square.sample(b_rng);
  CHECK(s == doctest::Approx(std::sqrt(u)).epsilon(1e-9));
}

TEST_CASE("generator matches the published mix sequence") {
  SplitMix64 rng(0);
  CHECK(rng.next() == 0xE220A8397B1DCDAFull);
  CHECK(rng.next() == 0x6E789E6AA1B965F4ull);
  CHECK(rng.next() == 0x06C45D188009454Full);
}

TEST_CASE("unit draws stay inside [0, 1) and bernoulli edges are exact") {
  SplitMix64 rng(99);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.next_unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  SplitMix64 edge(5);
  for (int i = 0; i < 100; ++i) {
    CHECK(!edge.bernoulli(0.0));
    CHECK(edge.bernoulli(1.0));
  }
}

TEST_CASE("bounded draws respect the bound and reject bias") {
  SplitMix64 rng(123);
  for (int i = 0; i < 2000; ++i) {
    CHECK(rng.next_below(7) < 7);
  }
  SplitMix64 one(123);
  for (int i = 0; i < 10; ++i) CHECK(one.next_below(1) == 0);
}

TEST_CASE("stream seeds differ across indices") {
  const std::uint64_t s0 = derive_stream_seed(42, 0);
  const std::uint64_t s1 = derive_stream_seed(42, 1);
  const std::uint64_t s2 = derive_stream_seed(43, 0);
  CHECK(s0 != s1);
  CHECK(s0 != s2);
  CHECK(s1 != s2);
}
