#include <cmath>
#include <numbers>
#include <vector>

#include "ctxprob/errors.hpp"
#include "ctxprob/interference.hpp"
#include "doctest.h"
#include "generators.hpp"

using namespace ctxprob;
using ctxprob::testing::Gen;

namespace {

constexpr double kPi = std::numbers::pi;
// Independent high-precision evaluations (mpmath, 30 digits).
constexpr double kAcos08 = 0.643501108793284386802809228717;
constexpr double kAcosh89 = 2.8760272423851932854363334254;

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

TEST_SUITE("interference") {
  TEST_CASE("total_probability") {
    CHECK(near(total_probability({0.5, 0.5}, 0.3, 0.3), 0.3, 1e-15));
    CHECK(near(total_probability({0.5, 0.5}, 0.2, 0.4), 0.3, 1e-15));
    CHECK(near(total_probability({0.3, 0.7}, 0.2, 0.6), 0.48, 1e-15));
  }

  TEST_CASE("perturbation_delta") {
    CHECK(perturbation_delta({0.3, 0.7}, 0.3, 0.3, 0.3) == 0.0);
    CHECK(near(perturbation_delta({0.5, 0.5}, 0.9, 0.5, 0.5), 0.4, 1e-15));
    CHECK(near(perturbation_delta({0.3, 0.7}, 0.5, 0.2, 0.6), 0.02, 1e-15));
    CHECK_THROWS_AS(perturbation_delta({0.6, 0.6}, 0.5, 0.2, 0.6), InvariantError);
  }

  TEST_CASE("lambda_coefficient") {
    const SplittingCoefficients c{0.5, 0.5};
    CHECK(near(lambda_coefficient(c, total_probability(c, 0.2, 0.4), 0.2, 0.4), 0.0, 1e-15));
    CHECK(near(lambda_coefficient(c, 0.9, 0.5, 0.5), 0.8, 1e-14));
    CHECK(near(lambda_coefficient(c, 0.99, 0.1, 0.1), 8.9, 1e-13));
    CHECK_THROWS_AS(lambda_coefficient(c, 0.5, 0.0, 0.4), DegenerateBranch);
    CHECK_THROWS_AS(lambda_coefficient({1.0, 0.0}, 0.5, 0.3, 0.4), DegenerateBranch);
  }

  TEST_CASE("classify") {
    const auto trig = classify(0.8, 1e-9);
    REQUIRE(std::holds_alternative<Trigonometric>(trig));
    CHECK(near(std::get<Trigonometric>(trig).theta, kAcos08, 1e-15));

    const auto hyp = classify(8.9, 1e-9);
    REQUIRE(std::holds_alternative<Hyperbolic>(hyp));
    CHECK(near(std::get<Hyperbolic>(hyp).theta, kAcosh89, 1e-14));
    CHECK(std::get<Hyperbolic>(hyp).sign == 1);

    const auto neg = classify(-8.9, 1e-9);
    REQUIRE(std::holds_alternative<Hyperbolic>(neg));
    CHECK(std::get<Hyperbolic>(neg).sign == -1);

    CHECK(std::holds_alternative<Boundary>(classify(1.0, 1e-9)));
    CHECK(std::holds_alternative<Boundary>(classify(-1.0 + 5e-10, 1e-9)));
    CHECK(std::holds_alternative<Trigonometric>(classify(-1.0 + 2e-9, 1e-9)));
    CHECK(std::get<Trigonometric>(classify(-0.999, 1e-9)).theta > 3.0);
    CHECK_THROWS_AS(classify(0.5, 0.0), InvariantError);
    CHECK(kind_name(classify(0.0)) == "trigonometric");
    CHECK_FALSE(kind_theta(Boundary{}).has_value());
  }

  TEST_CASE("forward_trig") {
    const SplittingCoefficients c{0.5, 0.5};
    CHECK(forward_trig(c, 0.5, 0.5, kPi) == 0.0);
    CHECK(near(forward_trig(c, 0.5, 0.5, kPi / 2), 0.5, 1e-15));
    CHECK(near(forward_trig(c, 0.5, 0.5, kAcos08), 0.9, 1e-15));
    CHECK_THROWS_AS(forward_trig(c, 0.5, 0.5, 4.0), InvariantError);
  }

  TEST_CASE("forward_hyp") {
    const SplittingCoefficients c{0.5, 0.5};
    CHECK(near(forward_hyp(c, 0.1, 0.1, kAcosh89, 1), 0.99, 1e-14));
    CHECK(forward_hyp({0.3, 0.7}, 0.2, 0.6, 0.0, 1) == forward_trig({0.3, 0.7}, 0.2, 0.6, 0.0));
    try {
      forward_hyp(c, 0.5, 0.5, 1.0, 1);
      FAIL("expected OutOfRange");
    } catch (const OutOfRange& e) {
      // 0.5 + 0.5 cosh(1), mpmath.
      CHECK(near(e.value(), 1.27154031740762188923895281038, 1e-14));
    }
    CHECK_THROWS_AS(forward_hyp(c, 0.5, 0.5, 1.0, -1), OutOfRange);
    CHECK_THROWS_AS(forward_hyp(c, 0.5, 0.5, -1.0, 1), InvariantError);
    CHECK_THROWS_AS(forward_hyp(c, 0.5, 0.5, 1.0, 0), InvariantError);
  }

  TEST_CASE("decompose: classical model has lambda 0 everywhere") {
    const SplittingCoefficients c{0.3, 0.7};
    ContextualModel m{OutcomeSpace{{"a", "b", "c"}}, {"S", {}}, {"S1", {0.2, 0.5, 0.3}}, {"S2", {0.4, 0.4, 0.2}}, c};
    for (std::size_t i = 0; i < 3; ++i)
      m.dist_S.probs.push_back(total_probability(c, m.dist_S1.probs[i], m.dist_S2.probs[i]));
    const auto d = decompose(m);
    for (const auto& bin : d.bins) {
      REQUIRE(bin.lambda.has_value());
      CHECK(std::abs(*bin.lambda) < 1e-15);
      REQUIRE(std::holds_alternative<Trigonometric>(*bin.kind));
      CHECK(near(std::get<Trigonometric>(*bin.kind).theta, kPi / 2, 1e-15));
    }
  }

  TEST_CASE("decompose: symmetric two-slit model recovers the construction phase") {
    // p1 = p2, pS built bin-wise with forward_trig, then the phases are read back.
    const std::size_t n = 40;
    const SplittingCoefficients c{0.5, 0.5};
    std::vector<double> env(n), theta(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      env[i] = 1.0 / static_cast<double>(n);
      // Symmetric about pi/2, so the interference term sums to zero.
      theta[i] = 0.05 + (kPi - 0.1) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    ContextualModel m{OutcomeSpace{}, {"S", {}}, {"S1", env}, {"S2", env}, c};
    for (std::size_t i = 0; i < n; ++i) {
      m.space.labels.push_back(std::to_string(i));
      m.dist_S.probs.push_back(forward_trig(c, env[i], env[i], theta[i]));
      total += m.dist_S.probs.back();
    }
    REQUIRE(near(total, 1.0, 1e-12));
    const auto d = decompose(m);
    for (std::size_t i = 0; i < n; ++i) {
      REQUIRE(std::holds_alternative<Trigonometric>(*d.bins[i].kind));
      CHECK(near(std::get<Trigonometric>(*d.bins[i].kind).theta, theta[i], 1e-9));
    }
  }

  TEST_CASE("decompose: zero conditional marks only that bin") {
    ContextualModel m{OutcomeSpace{{"a", "b"}}, {"S", {0.5, 0.5}}, {"S1", {0.0, 1.0}}, {"S2", {0.5, 0.5}}, {0.5, 0.5}};
    const auto d = decompose(m);
    CHECK(d.bins[0].degenerate());
    CHECK_FALSE(d.bins[0].kind.has_value());
    CHECK_FALSE(d.bins[1].degenerate());
    CHECK(d.bins[1].kind.has_value());
  }

  TEST_CASE("decompose rejects invalid models") {
    ContextualModel m{OutcomeSpace{{"a"}}, {"S", {1.0}}, {"S1", {1.0}}, {"S2", {1.0}}, {0.6, 0.6}};
    CHECK_THROWS_AS(decompose(m), InvariantError);
  }

  TEST_CASE("property: reconstruction identity reproduces P_S") {
    Gen g(101);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t n = 2 + static_cast<std::size_t>(g.uniform(0, 30));
      auto random_dist = [&](const char* id) {
        ContextualDistribution d{id, {}};
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          d.probs.push_back(g.probability());
          total += d.probs.back();
        }
        for (auto& p : d.probs) p /= total;
        return d;
      };
      ContextualModel m{OutcomeSpace{}, random_dist("S"), random_dist("S1"), random_dist("S2"), g.coeffs()};
      for (std::size_t i = 0; i < n; ++i) m.space.labels.push_back(std::to_string(i));
      if (!validate_model(m).empty()) continue;
      const auto d = decompose(m);
      for (std::size_t i = 0; i < n; ++i) {
        const auto& b = d.bins[i];
        CHECK(near(b.classical_part + b.delta, m.dist_S.probs[i], 1e-12));
        if (b.lambda) CHECK(near(b.classical_part + b.interference_scale * *b.lambda, m.dist_S.probs[i], 1e-12));
      }
    }
  }

  TEST_CASE("property: trigonometric round trip") {
    Gen g(202);
    for (int trial = 0; trial < 10000; ++trial) {
      const auto c = g.coeffs();
      const double p1 = g.probability(), p2 = g.probability(), theta = g.open_phase();
      if (!(c.c1 * p1 > 0.0 && c.c2 * p2 > 0.0)) continue;
      const double pS = forward_trig(c, p1, p2, theta);
      // Cauchy-Schwarz: (sqrt(c1 p1) + sqrt(c2 p2))^2 <= p1 + p2.
      CHECK(pS >= 0.0);
      CHECK(pS <= p1 + p2 + 1e-15);
      if (p1 + p2 <= 1.0) CHECK(pS <= 1.0 + 1e-15);
      const double lambda = lambda_coefficient(c, pS, p1, p2);
      CHECK(near(lambda, std::cos(theta), 1e-12));
      const auto kind = classify(lambda);
      if (std::abs(std::cos(theta)) < 1.0 - 2e-9) {
        REQUIRE(std::holds_alternative<Trigonometric>(kind));
        CHECK(near(std::get<Trigonometric>(kind).theta, theta, 1e-9));
      }
    }
  }

  TEST_CASE("property: hyperbolic round trip on the realizable domain") {
    Gen g(303);
    int accepted = 0;
    for (int trial = 0; trial < 20000; ++trial) {
      const auto c = g.coeffs();
      const double p1 = g.probability(), p2 = g.probability();
      const double theta = g.uniform(0.0, 4.0);
      const int sign = g.sign();
      double pS = 0.0;
      try {
        pS = forward_hyp(c, p1, p2, theta, sign);
      } catch (const OutOfRange&) {
        continue;
      }
      ++accepted;
      const double lambda = lambda_coefficient(c, pS, p1, p2);
      CHECK(near(lambda, sign * std::cosh(theta), 1e-12 * std::max(1.0, std::cosh(theta))));
      const auto kind = classify(lambda);
      if (std::cosh(theta) > 1.0 + 2e-9) {
        REQUIRE(std::holds_alternative<Hyperbolic>(kind));
        CHECK(near(std::get<Hyperbolic>(kind).theta, theta, 1e-9));
        CHECK(std::get<Hyperbolic>(kind).sign == sign);
      }
    }
    CHECK(accepted > 1000);
  }

  TEST_CASE("property: correspondence principle") {
    Gen g(404);
    for (int trial = 0; trial < 100; ++trial) {
      const auto c = g.coeffs();
      const double pS = g.uniform(0.1, 0.9);
      CHECK(perturbation_delta(c, pS, pS, pS) == 0.0);
      const double d1 = g.uniform(-1, 1), d2 = g.uniform(-1, 1);
      double previous = 0.0;
      for (int k = 1; k <= 6; ++k) {
        const double eps = std::pow(10.0, -k);
        const double delta = perturbation_delta(c, pS, pS + eps * d1, pS + eps * d2);
        // Lipschitz in (p1, p2) with constant 2 max(c1, c2).
        CHECK(std::abs(delta) <= 2.0 * std::max(c.c1, c.c2) * eps * std::max(std::abs(d1), std::abs(d2)) + 1e-15);
        if (k > 1 && std::abs(previous) > 1e-12) CHECK(std::abs(delta) == doctest::Approx(std::abs(previous) / 10).epsilon(1e-4));
        previous = delta;
      }
    }
  }
}
