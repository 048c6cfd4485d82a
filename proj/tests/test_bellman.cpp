#include "doctest.h"

#include <cmath>

#include "baforms/bellman.hpp"
#include "baforms/rng.hpp"

using namespace baf;

namespace {

BellmanPoint interior_point(int dim, double p, Rng& rng) {
  BellmanPoint a;
  a.p = p;
  a.xi = Eigen::VectorXd::Zero(dim);
  a.gamma = Eigen::VectorXd::Zero(dim);
  for (int i = 0; i < dim; ++i) {
    a.xi(i) = rng.uniform(-1.0, 1.0);
    a.gamma(i) = rng.uniform(-1.0, 1.0);
  }
  a.Xi = std::pow(a.xi.norm(), p) * (1.5 + rng.uniform()) + 0.5;
  a.Gamma = std::pow(a.gamma.norm(), a.q()) * (1.5 + rng.uniform()) + 0.5;
  return a;
}

}  // namespace

TEST_CASE("domain membership is strict") {
  BellmanPoint a;
  a.p = 3;
  a.xi = Eigen::Vector2d(0.5, 0.0);
  a.gamma = Eigen::Vector2d(0.0, 0.5);
  a.Xi = 1.0;
  a.Gamma = 1.0;
  CHECK(a.feasible());
  CHECK_NOTHROW(a.validate());
  CHECK(a.q() == doctest::Approx(1.5));

  SUBCASE("boundary is excluded") {
    a.Xi = std::pow(0.5, 3.0);
    CHECK(!a.feasible());
    CHECK_THROWS(a.validate());
  }
  SUBCASE("exponent range") {
    a.p = 1.5;
    CHECK(!a.feasible());
    CHECK_THROWS(a.validate());
  }
  SUBCASE("dimension mismatch") {
    a.gamma = Eigen::VectorXd::Zero(3);
    CHECK(!a.feasible());
    CHECK_THROWS(a.validate());
  }
  SUBCASE("nonpositive budgets") {
    a.Gamma = 0.0;
    CHECK(!a.feasible());
    CHECK_THROWS(a.validate());
  }
}

TEST_CASE("constrained samples hit both moment constraints") {
  Rng rng(71);
  for (double p : {2.0, 3.0, 4.0}) {
    for (int depth : {1, 3, 6}) {
      Eigen::VectorXd xi(3);
      xi << 0.3, -0.2, 0.1;
      const double target = 2.0;
      Rng child = rng.child(static_cast<std::uint64_t>(depth) * 100 + static_cast<std::uint64_t>(p));
      DyadicFunction f = DyadicFunction::zero(0, 3);
      REQUIRE(constrained_sample(xi, target, p, depth, child, f));
      CHECK(f.depth == depth);
      CHECK((dyadic_mean(f) - xi).norm() < 1e-10);
      CHECK(std::pow(dyadic_norm_lp(f, p), p) == doctest::Approx(target).epsilon(1e-9));
    }
  }
}

TEST_CASE("probe value respects the size bound and reports its witness") {
  Rng rng(73);
  for (int rep = 0; rep < 6; ++rep) {
    const BellmanPoint a = interior_point(2, 2.0 + rep, rng);
    const BellmanProbeResult res = bellman_probe(a, 4, 20, 500 + static_cast<std::uint64_t>(rep));
    CHECK(res.size_bound ==
          doctest::Approx((a.p - 1.0) * std::pow(a.Xi, 1.0 / a.p) * std::pow(a.Gamma, 1.0 / a.q())));
    CHECK(res.value >= 0.0);
    CHECK(res.value <= res.size_bound + 1e-9);
    CHECK(res.samples > 0);
    CHECK(!res.no_sample);

    // The recorded witness reproduces the reported value and satisfies the
    // admissibility constraints.
    CHECK(bilinear_haar_sum(res.witness.f, res.witness.g) == doctest::Approx(res.value).epsilon(1e-12));
    CHECK((dyadic_mean(res.witness.f) - a.xi).norm() < 1e-9);
    CHECK((dyadic_mean(res.witness.g) - a.gamma).norm() < 1e-9);
    CHECK(std::pow(dyadic_norm_lp(res.witness.f, a.p), a.p) == doctest::Approx(a.Xi).epsilon(1e-8));
    CHECK(std::pow(dyadic_norm_lp(res.witness.g, a.q()), a.q()) ==
          doctest::Approx(a.Gamma).epsilon(1e-8));
  }
}

TEST_CASE("depth cap zero leaves only the constant pair") {
  Rng rng(79);
  const BellmanPoint a = interior_point(3, 3.0, rng);
  const BellmanProbeResult res = bellman_probe(a, 0, 50, 9);
  CHECK(res.value == 0.0);
  CHECK(!res.no_sample);
  CHECK(res.witness.f.depth == 0);
  CHECK((res.witness.f.samples.col(0) - a.xi).norm() == 0.0);
  CHECK((res.witness.g.samples.col(0) - a.gamma).norm() == 0.0);
}

TEST_CASE("estimates are nondecreasing in budget and in depth cap") {
  Rng rng(83);
  const BellmanPoint a = interior_point(2, 4.0, rng);
  const std::uint64_t seed = 1234;

  double prev = -1;
  for (int budget : {1, 5, 20, 60}) {
    const double v = bellman_probe(a, 3, budget, seed).value;
    CHECK(v >= prev);
    prev = v;
  }

  prev = -1;
  for (int cap : {0, 1, 2, 4, 6}) {
    const double v = bellman_probe(a, cap, 20, seed).value;
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("probe is deterministic in its seed") {
  Rng rng(89);
  const BellmanPoint a = interior_point(2, 3.0, rng);
  const BellmanProbeResult r1 = bellman_probe(a, 4, 25, 77);
  const BellmanProbeResult r2 = bellman_probe(a, 4, 25, 77);
  CHECK(r1.value == r2.value);
  CHECK(r1.samples == r2.samples);
  CHECK((r1.witness.f.samples - r2.witness.f.samples).norm() == 0.0);
  const BellmanProbeResult r3 = bellman_probe(a, 4, 25, 78);
  CHECK(r3.value != r1.value);
}

TEST_CASE("probe argument validation") {
  Rng rng(97);
  const BellmanPoint a = interior_point(2, 2.0, rng);
  CHECK_THROWS(bellman_probe(a, -1, 10, 0));
  CHECK_THROWS(bellman_probe(a, 17, 10, 0));
  CHECK_THROWS(bellman_probe(a, 3, 0, 0));
  BellmanPoint bad = a;
  bad.Xi = std::pow(bad.xi.norm(), bad.p) * 0.5;
  CHECK_THROWS(bellman_probe(bad, 3, 10, 0));
}

TEST_CASE("refinement preserves averages, norms, and the bilinear sum") {
  Rng rng(101);
  const DyadicFunction f = random_dyadic(3, 2, rng);
  const DyadicFunction g = random_dyadic(3, 2, rng);
  const DyadicFunction f6 = refine(f, 6);
  const DyadicFunction g6 = refine(g, 6);
  CHECK(f6.depth == 6);
  CHECK((dyadic_mean(f6) - dyadic_mean(f)).norm() < 1e-14);
  CHECK(dyadic_norm_lp(f6, 3.0) == doctest::Approx(dyadic_norm_lp(f, 3.0)).epsilon(1e-15));
  CHECK(bilinear_haar_sum(f6, g6) == doctest::Approx(bilinear_haar_sum(f, g)).epsilon(1e-15));
  CHECK_THROWS(refine(f, 2));
}

TEST_CASE("concatenation splits into top term plus averaged halves") {
  Rng rng(103);
  for (int rep = 0; rep < 100; ++rep) {
    const int dim = 1 + static_cast<int>(rng.next_u64() % 3);
    const int dm = static_cast<int>(rng.next_u64() % 4);
    const int dp = static_cast<int>(rng.next_u64() % 4);
    BellmanWitness minus{random_dyadic(dm, dim, rng), random_dyadic(dm, dim, rng)};
    BellmanWitness plus{random_dyadic(dp, dim, rng), random_dyadic(dp, dim, rng)};

    const ConcatResult res = bellman_concat(minus, plus);
    CHECK(res.witness.f.depth == std::max(dm, dp) + 1);
    CHECK(res.concat_sum ==
          doctest::Approx(res.top_term + res.halves_average).epsilon(1e-12));

    // The concatenated pair really is the two halves laid side by side.
    const long long half = res.witness.f.cells() / 2;
    const DyadicFunction fm = refine(minus.f, res.witness.f.depth - 1);
    for (long long j = 0; j < half; ++j)
      CHECK((res.witness.f.samples.col(j) - fm.samples.col(j)).norm() == 0.0);
  }
}

TEST_CASE("concatenating a witness with itself adds nothing on top") {
  Rng rng(107);
  BellmanWitness w{random_dyadic(3, 2, rng), random_dyadic(3, 2, rng)};
  const ConcatResult res = bellman_concat(w, w);
  CHECK(res.top_term == 0.0);
  CHECK(res.concat_sum == doctest::Approx(bilinear_haar_sum(w.f, w.g)).epsilon(1e-14));
}

TEST_CASE("deeper probes can beat the trivial estimate") {
  // At a point with zero means, oscillation is free: the probe should find a
  // strictly positive lower estimate as soon as it may oscillate at all.
  BellmanPoint a;
  a.p = 2.0;
  a.xi = Eigen::VectorXd::Zero(1);
  a.gamma = Eigen::VectorXd::Zero(1);
  a.Xi = 1.0;
  a.Gamma = 1.0;
  const BellmanProbeResult res = bellman_probe(a, 3, 40, 11);
  CHECK(res.value > 0.1);
  CHECK(res.value <= res.size_bound + 1e-9);
}
