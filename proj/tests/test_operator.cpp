#include "doctest.h"

#include <cmath>
#include <complex>

#include "baforms/fields.hpp"
#include "baforms/operator.hpp"
#include "baforms/rng.hpp"

using namespace baf;

namespace {

Eigen::VectorXd random_xi(int m, Rng& rng) {
  Eigen::VectorXd xi(m);
  for (int a = 0; a < m; ++a) xi[a] = rng.gaussian();
  if (xi.squaredNorm() < 1e-12) xi[0] = 1.0;
  return xi;
}

double max_channel_dev(const FormField& a, const FormField& b) {
  double dev = 0;
  for (size_t c = 0; c < a.ch.size(); ++c)
    for (size_t i = 0; i < a.ch[c].v.size(); ++i)
      dev = std::max(dev, std::abs(a.ch[c].v[i] - b.ch[c].v[i]));
  return dev;
}

}  // namespace

TEST_CASE("entry and wedge routes build the same matrix") {
  Rng rng(701);
  for (int m = 1; m <= 5; ++m)
    for (int k = 0; k <= m; ++k)
      for (int trial = 0; trial < 20; ++trial) {
        const Eigen::VectorXd xi = random_xi(m, rng);
        const Eigen::MatrixXd A = build_multiplier(m, k, xi, MultiplierRoute::entry);
        const Eigen::MatrixXd B = build_multiplier(m, k, xi, MultiplierRoute::wedge);
        CHECK((A - B).cwiseAbs().maxCoeff() < 1e-12);
      }
}

TEST_CASE("multiplier is symmetric and orthogonal") {
  Rng rng(702);
  for (int m = 2; m <= 5; ++m)
    for (int k = 0; k <= m; ++k)
      for (int trial = 0; trial < 10; ++trial) {
        const Eigen::VectorXd xi = random_xi(m, rng);
        const Eigen::MatrixXd M = build_multiplier(m, k, xi, MultiplierRoute::entry);
        CHECK((M - M.transpose()).cwiseAbs().maxCoeff() < 1e-13);
        const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(M.rows(), M.cols());
        CHECK((M.transpose() * M - I).cwiseAbs().maxCoeff() < 1e-12);
      }
}

TEST_CASE("degree-2 matrix in dimension 4 matches the hand-derived entries") {
  // xi = (1,2,3,4), |xi|^2 = 30; basis order 12,13,14,23,24,34.
  Eigen::VectorXd xi(4);
  xi << 1, 2, 3, 4;
  Eigen::MatrixXd P(6, 6);
  // clang-format off
  P <<  20, -12, -16,   6,   8,   0,
       -12,  10, -24,  -4,   0,   8,
       -16, -24,  -4,   0,  -4,  -6,
         6,  -4,   0,   4, -24,  16,
         8,   0,  -4, -24, -10, -12,
         0,   8,  -6,  16, -12, -20;
  // clang-format on
  P /= 30.0;
  const Eigen::MatrixXd M = build_multiplier(4, 2, xi, MultiplierRoute::entry);
  CHECK((M - P).cwiseAbs().maxCoeff() < 1e-14);
  // the pattern of sign flips relative to -2 xi_p xi_q: exactly these pairs
  CHECK(M(0, 3) == doctest::Approx(2.0 * xi[0] * xi[2] / 30.0));
  CHECK(M(0, 4) == doctest::Approx(2.0 * xi[0] * xi[3] / 30.0));
  CHECK(M(1, 5) == doctest::Approx(2.0 * xi[0] * xi[3] / 30.0));
  CHECK(M(3, 5) == doctest::Approx(2.0 * xi[1] * xi[3] / 30.0));
  CHECK(M(1, 4) == 0.0);  // disjoint index pair
}

TEST_CASE("scalar endpoints of the multiplier") {
  Rng rng(703);
  for (int m = 1; m <= 6; ++m)
    for (int trial = 0; trial < 5; ++trial) {
      const Eigen::VectorXd xi = random_xi(m, rng);
      const Eigen::MatrixXd M0 = build_multiplier(m, 0, xi, MultiplierRoute::entry);
      REQUIRE(M0.rows() == 1);
      CHECK(M0(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
      const Eigen::MatrixXd Mm = build_multiplier(m, m, xi, MultiplierRoute::entry);
      REQUIRE(Mm.rows() == 1);
      CHECK(Mm(0, 0) == doctest::Approx(-1.0).epsilon(1e-14));
    }
}

TEST_CASE("classical two-dimensional multiplier on 1-forms") {
  Eigen::VectorXd xi(2);
  xi << 3, -2;
  const double n2 = 13.0;
  const Eigen::MatrixXd M = build_multiplier(2, 1, xi, MultiplierRoute::entry);
  CHECK(M(0, 0) == doctest::Approx((-9.0 + 4.0) / n2));
  CHECK(M(1, 1) == doctest::Approx((9.0 - 4.0) / n2));
  CHECK(M(0, 1) == doctest::Approx(-2.0 * 3.0 * -2.0 / n2));
  CHECK(M(1, 0) == doctest::Approx(M(0, 1)));
}

TEST_CASE("multiplier argument validation") {
  Eigen::VectorXd xi(3);
  xi << 1, 2, 3;
  CHECK_THROWS_AS(build_multiplier(2, 1, xi, MultiplierRoute::entry), std::domain_error);
  CHECK_THROWS_AS(build_multiplier(3, 1, Eigen::VectorXd::Zero(3), MultiplierRoute::entry),
                  std::domain_error);
  const auto basis2 = enumerate_multi_indices(2, 1);
  const auto basis31 = enumerate_multi_indices(3, 1);
  CHECK_THROWS_AS(multiplier_entry(basis2[0], basis31[0], xi), std::domain_error);
}

TEST_CASE("operator application agrees with the direct matrix at every mode") {
  GridSpec spec;
  spec.m = 2;
  spec.sizes = {8, 8};
  spec.box = {2 * M_PI, 2 * M_PI};
  Rng rng(704);
  FormField f = random_form_field(spec, 1, rng);
  FormField g = apply_operator(f, MultiplierPart::full);
  f.to_rep(Rep::frequency);
  g.to_rep(Rep::frequency);
  double xi[12];
  for (std::size_t idx = 0; idx < spec.npoints(); ++idx) {
    frequency_vector(spec, idx, xi);
    Eigen::Vector2cd v(f.ch[0].v[idx], f.ch[1].v[idx]);
    Eigen::Vector2cd w(g.ch[0].v[idx], g.ch[1].v[idx]);
    if (xi[0] == 0.0 && xi[1] == 0.0) {
      // mean annihilated up to transform round-trip dust
      CHECK(std::abs(w[0]) < 1e-14);
      CHECK(std::abs(w[1]) < 1e-14);
      continue;
    }
    Eigen::Vector2d x(xi[0], xi[1]);
    Eigen::Vector2cd want = build_multiplier(2, 1, x, MultiplierRoute::entry) * v;
    CHECK(std::abs(w[0] - want[0]) < 1e-12);
    CHECK(std::abs(w[1] - want[1]) < 1e-12);
  }
}

TEST_CASE("matrix route and iterated-Riesz route act identically") {
  Rng rng(705);
  struct Case {
    int m;
    std::vector<int> sizes;
  };
  const std::vector<Case> cases = {{2, {16, 16}}, {3, {8, 8, 8}}};
  for (const auto& cs : cases) {
    GridSpec spec;
    spec.m = cs.m;
    spec.sizes = cs.sizes;
    spec.box.assign(cs.m, 2 * M_PI);
    for (int k = 0; k <= cs.m; ++k) {
      FormField f = random_form_field(spec, k, rng);
      for (MultiplierPart part :
           {MultiplierPart::full, MultiplierPart::diagonal, MultiplierPart::offdiag}) {
        FormField a = apply_operator(f, part);
        FormField b = apply_operator_riesz(f, part);
        CHECK(max_channel_dev(a, b) < 1e-10);
      }
      // the two parts sum to the whole
      FormField d = apply_operator(f, MultiplierPart::diagonal);
      FormField o = apply_operator(f, MultiplierPart::offdiag);
      FormField full = apply_operator(f, MultiplierPart::full);
      for (size_t c = 0; c < full.ch.size(); ++c)
        for (size_t i = 0; i < full.ch[c].v.size(); ++i)
          CHECK(std::abs(full.ch[c].v[i] - d.ch[c].v[i] - o.ch[c].v[i]) < 1e-12);
    }
  }
}

TEST_CASE("operator is an L2 isometry on mean-free fields and drops constants") {
  GridSpec spec;
  spec.m = 3;
  spec.sizes = {8, 8, 8};
  spec.box = {2 * M_PI, 2 * M_PI, 2 * M_PI};
  Rng rng(706);
  for (int k = 0; k <= 3; ++k) {
    FormField f = random_form_field(spec, k, rng);
    FormField g = apply_operator(f, MultiplierPart::full);
    const double nf = std::sqrt(std::real(pairing_l2(f, f)));
    const double ng = std::sqrt(std::real(pairing_l2(g, g)));
    CHECK(ng == doctest::Approx(nf).epsilon(1e-12));
    // involution: the multiplier squares to the identity
    FormField gg = apply_operator(g, MultiplierPart::full);
    CHECK(max_channel_dev(gg, f) < 1e-10);
  }
  FormField c = FormField::zero(spec, 1, Rep::spatial);
  for (auto& chan : c.ch)
    for (auto& z : chan.v) z = 2.5;
  FormField gc = apply_operator(c, MultiplierPart::full);
  for (auto& chan : gc.ch)
    for (auto& z : chan.v) CHECK(std::abs(z) < 1e-13);
}

TEST_CASE("degree-0 fields pass through unchanged apart from the mean") {
  GridSpec spec;
  spec.m = 2;
  spec.sizes = {16, 16};
  spec.box = {2 * M_PI, 2 * M_PI};
  Rng rng(707);
  FormField f = random_form_field(spec, 0, rng);  // already mean-free
  FormField g = apply_operator(f, MultiplierPart::full);
  CHECK(max_channel_dev(g, f) < 1e-12);
  // top degree: minus the identity
  FormField t = random_form_field(spec, 2, rng);
  FormField gt = apply_operator(t, MultiplierPart::full);
  for (size_t i = 0; i < t.ch[0].v.size(); ++i)
    CHECK(std::abs(gt.ch[0].v[i] + t.ch[0].v[i]) < 1e-12);
}

TEST_CASE("operator is self-adjoint for the L2 pairing") {
  GridSpec spec;
  spec.m = 2;
  spec.sizes = {16, 16};
  spec.box = {2 * M_PI, 2 * M_PI};
  Rng rng(708);
  FormField f = random_form_field(spec, 1, rng);
  FormField g = random_form_field(spec, 1, rng);
  const auto lhs = pairing_l2(apply_operator(f, MultiplierPart::full), g);
  const auto rhs = pairing_l2(f, apply_operator(g, MultiplierPart::full));
  CHECK(std::abs(lhs - rhs) < 1e-12);
}

TEST_CASE("star conjugation swaps the operator across complementary degrees") {
  Rng rng(709);
  struct Case {
    int m;
    std::vector<int> sizes;
  };
  const std::vector<Case> cases = {{2, {16, 16}}, {3, {8, 8, 8}}, {4, {8, 8, 8, 8}}};
  for (const auto& cs : cases) {
    GridSpec spec;
    spec.m = cs.m;
    spec.sizes = cs.sizes;
    spec.box.assign(cs.m, 2 * M_PI);
    for (int k = 0; k <= cs.m; ++k) {
      FormField f = random_form_field(spec, k, rng);
      FormField lhs = hodge_star(apply_operator(f, MultiplierPart::full));
      FormField rhs = apply_operator(hodge_star(f), MultiplierPart::full);
      for (size_t c = 0; c < lhs.ch.size(); ++c)
        for (size_t i = 0; i < lhs.ch[c].v.size(); ++i)
          CHECK(std::abs(lhs.ch[c].v[i] + rhs.ch[c].v[i]) < 1e-10);
    }
  }
}

TEST_CASE("off-diagonal term count") {
  CHECK(offdiag_term_count(2, 1) == 4);
  CHECK(offdiag_term_count(3, 1) == 12);
  CHECK(offdiag_term_count(4, 2) == 48);
  CHECK(offdiag_term_count(5, 2) == 120);
  CHECK(offdiag_term_count(6, 3) == 360);
  for (int m = 1; m <= 6; ++m) {
    CHECK(offdiag_term_count(m, 0) == 0);
    CHECK(offdiag_term_count(m, m) == 0);
  }
  // matches the number of structurally nonzero off-diagonal entries, twice over
  for (int m = 2; m <= 5; ++m)
    for (int k = 0; k <= m; ++k) {
      Eigen::VectorXd xi(m);
      Rng rng(710 + 10 * m + k);
      for (int a = 0; a < m; ++a) xi[a] = 1.0 + rng.uniform();  // no accidental zeros
      const Eigen::MatrixXd M = build_multiplier(m, k, xi, MultiplierRoute::entry);
      long long nz = 0;
      for (Eigen::Index r = 0; r < M.rows(); ++r)
        for (Eigen::Index c = 0; c < M.cols(); ++c)
          if (r != c && M(r, c) != 0.0) ++nz;
      CHECK(offdiag_term_count(m, k) == 2 * nz);
    }
  CHECK_THROWS_AS(offdiag_term_count(3, 4), std::domain_error);
  CHECK_THROWS_AS(offdiag_term_count(3, -1), std::domain_error);
}

TEST_CASE("norm-ratio search") {
  GridSpec spec;
  spec.m = 2;
  spec.sizes = {16, 16};
  spec.box = {2 * M_PI, 2 * M_PI};

  SUBCASE("p = 2 is an exact isometry") {
    const auto r = norm_search(spec, 1, 2.0, 2, 20, 11);
    CHECK(r.best_ratio == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.max_evaluated == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.search_exponent == 2.0);
    CHECK(r.bound == doctest::Approx(2.0));
    CHECK(!r.violated);
    CHECK(r.evaluations > 0);
    CHECK(!r.trace.empty());
  }

  SUBCASE("p = 4 stays below the linear bound and improves on random starts") {
    const auto r = norm_search(spec, 1, 4.0, 3, 60, 11);
    CHECK(r.bound == doctest::Approx(6.0));
    CHECK(r.best_ratio > 1.3);
    CHECK(r.best_ratio < r.bound);
    CHECK(!r.violated);
    // the trace is a nondecreasing running best
    for (size_t i = 1; i < r.trace.size(); ++i) {
      CHECK(r.trace[i].second >= r.trace[i - 1].second);
      CHECK(r.trace[i].first > r.trace[i - 1].first);
    }
    CHECK(r.trace.back().second == doctest::Approx(r.best_ratio));
  }

  SUBCASE("exponents below 2 search the dual side") {
    const auto a = norm_search(spec, 1, 4.0 / 3.0, 2, 30, 11);
    const auto b = norm_search(spec, 1, 4.0, 2, 30, 11);
    CHECK(a.search_exponent == doctest::Approx(4.0));
    CHECK(a.bound == doctest::Approx(b.bound));
    CHECK(a.best_ratio == doctest::Approx(b.best_ratio).epsilon(1e-15));
  }

  SUBCASE("same seed, same result; longer budget never loses ground") {
    const auto a = norm_search(spec, 1, 4.0, 2, 25, 31);
    const auto b = norm_search(spec, 1, 4.0, 2, 25, 31);
    CHECK(a.best_ratio == b.best_ratio);
    CHECK(a.evaluations == b.evaluations);
    CHECK(a.trace == b.trace);
    const auto c = norm_search(spec, 1, 4.0, 2, 60, 31);
    CHECK(c.best_ratio >= a.best_ratio);
  }

  SUBCASE("argument validation") {
    CHECK_THROWS_AS(norm_search(spec, 3, 4.0, 1, 10, 1), std::domain_error);
    CHECK_THROWS_AS(norm_search(spec, 1, 1.0, 1, 10, 1), std::domain_error);
    CHECK_THROWS_AS(norm_search(spec, 1, 4.0, 0, 10, 1), std::domain_error);
  }
}

TEST_CASE("entry perturbation hook shifts the entry route only") {
  Eigen::VectorXd xi(3);
  xi << 1, -2, 2;
  set_multiplier_perturbation(1e-3);
  const Eigen::MatrixXd A = build_multiplier(3, 1, xi, MultiplierRoute::entry);
  const Eigen::MatrixXd B = build_multiplier(3, 1, xi, MultiplierRoute::wedge);
  const double dev = (A - B).cwiseAbs().maxCoeff();
  CHECK(dev == doctest::Approx(1e-3).epsilon(1e-9));
  set_multiplier_perturbation(0.0);
  const Eigen::MatrixXd C = build_multiplier(3, 1, xi, MultiplierRoute::entry);
  CHECK((C - B).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(multiplier_perturbation() == 0.0);
}
