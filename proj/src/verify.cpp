#include "baforms/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "baforms/haar.hpp"
#include "baforms/heat.hpp"
#include "baforms/operator.hpp"

namespace baf {

namespace {

GridSpec torus(int m, int n) {
  GridSpec s;
  s.m = m;
  s.sizes.assign(static_cast<size_t>(m), n);
  s.box.assign(static_cast<size_t>(m), 2 * M_PI);
  return s;
}

// Fixed per-suite seed keys: results must not depend on suite selection.
constexpr std::uint64_t kSuiteKey = 0xba5e;

// Double application of the star against the sign rule, on coefficient bases
// and on whole fields.  The operation is an exact signed permutation, so the
// tolerance only covers degenerate representation bugs.
SuiteResult suite_hodge(const VerifyConfig& cfg) {
  SuiteResult res;
  res.tolerance = 1e-12;
  Rng rng = Rng(cfg.seed).child(kSuiteKey + 0);
  for (int m = 1; m <= 6; ++m) {
    for (int k = 0; k <= m; ++k) {
      const double sign = ((k * (m - k)) % 2 == 0) ? 1.0 : -1.0;
      double dev = 0;
      for (const MultiIndex& i : enumerate_multi_indices(m, k)) {
        const FormVector e = FormVector::basis(m, i);
        const FormVector back = hodge_star(hodge_star(e));
        dev = std::max(dev, (back.coeffs - sign * e.coeffs).norm());
      }
      FormField f = random_form_field(torus(m, 4), k, rng);
      FormField back = hodge_star(hodge_star(f));
      for (int c = 0; c < f.dim(); ++c)
        for (size_t x = 0; x < f.ch[static_cast<size_t>(c)].v.size(); ++x)
          dev = std::max(dev, std::abs(back.ch[static_cast<size_t>(c)].v[x] -
                                       sign * f.ch[static_cast<size_t>(c)].v[x]));
      ++res.trials;
      res.worst = std::max(res.worst, dev);
      if (dev > res.tolerance) ++res.violations;
    }
  }
  return res;
}

// Entry-formula multiplier against the wedge/contraction assembly, plus
// orthogonality of the matrix, over random frequencies.
SuiteResult suite_multiplier(const VerifyConfig& cfg) {
  SuiteResult res;
  res.tolerance = 1e-12;
  Rng rng = Rng(cfg.seed).child(kSuiteKey + 1);
  std::vector<std::pair<int, int>> pairs;
  for (int m = 1; m <= 5; ++m)
    for (int k = 0; k <= m; ++k) pairs.emplace_back(m, k);
  const long long total = cfg.trials > 0 ? cfg.trials : 400;
  for (long long t = 0; t < total; ++t) {
    const auto [m, k] = pairs[static_cast<size_t>(t % pairs.size())];
    Eigen::VectorXd xi(m);
    for (int i = 0; i < m; ++i) xi(i) = rng.gaussian();
    if (xi.norm() < 1e-8) xi(0) += 1.0;
    const Eigen::MatrixXd a = build_multiplier(m, k, xi, MultiplierRoute::entry);
    const Eigen::MatrixXd b = build_multiplier(m, k, xi, MultiplierRoute::wedge);
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(a.rows(), a.cols());
    const double dev = std::max((a - b).cwiseAbs().maxCoeff(),
                                (a.transpose() * a - id).cwiseAbs().maxCoeff());
    ++res.trials;
    res.worst = std::max(res.worst, dev);
    if (dev > res.tolerance) ++res.violations;
  }
  return res;
}

// Littlewood-Paley pairing identity: double-Riesz pairing against its closed
// frequency-space form, across axis pairs and low dimensions.
SuiteResult suite_lp_identity(const VerifyConfig& cfg) {
  SuiteResult res;
  res.tolerance = 1e-10;
  Rng rng = Rng(cfg.seed).child(kSuiteKey + 2);
  const long long total = cfg.trials > 0 ? cfg.trials : 48;
  long long t = 0;
  while (t < total) {
    const int m = 2 + static_cast<int>(t % 2);
    const GridSpec spec = torus(m, m == 2 ? 16 : 8);
    const int deg = static_cast<int>((t / 2) % 2);
    FormField phi = random_form_field(spec, deg, rng);
    FormField psi = random_form_field(spec, deg, rng);
    const Quadrature quad = field_quadrature(phi, psi, 12);
    for (int j = 1; j <= m && t < total; ++j) {
      for (int k = 1; k <= m && t < total; ++k) {
        const PairingIdentityResult r = lp_pairing_identity(phi, psi, j, k, quad);
        const double dev =
            std::abs(r.lhs - r.rhs_analytic) / std::max(1.0, std::abs(r.lhs));
        ++res.trials;
        ++t;
        res.worst = std::max(res.worst, dev);
        if (dev > res.tolerance) ++res.violations;
      }
    }
  }
  return res;
}

// Bilinear embedding inequality and its axis-l1 variant on random pairs.
SuiteResult suite_embedding(const VerifyConfig& cfg) {
  SuiteResult res;
  res.tolerance = 1e-9;
  Rng rng = Rng(cfg.seed).child(kSuiteKey + 3);
  const double ps[] = {2.0, 2.5, 3.0, 4.0, 8.0};
  const long long total = cfg.trials > 0 ? cfg.trials : 120;
  for (long long t = 0; t < total; ++t) {
    const int m = 2;
    const GridSpec spec = torus(m, 16);
    const int deg = static_cast<int>(t % 3);
    const double p = ps[(t / 3) % 5];
    const double q = p / (p - 1.0);
    FormField phi = random_form_field(spec, deg, rng);
    FormField psi = random_form_field(spec, deg, rng);
    const Quadrature quad = field_quadrature(phi, psi, 48);
    const double l2 = embedding_lhs(phi, psi, quad);
    const double l1 = embedding_l1_lhs(phi, psi, quad);
    const double base = norm_lp(phi, p) * norm_lp(psi, q);
    // Signed relative slack; > 0 would breach the bound.
    const double slack =
        std::max({(l2 - (p - 1.0) * base) / ((p - 1.0) * base),
                  (l1 - m * (p - 1.0) * base) / (m * (p - 1.0) * base),
                  (l2 - l1) / std::max(l1, 1e-300)});
    ++res.trials;
    res.worst = std::max(res.worst, slack);
    if (slack > res.tolerance) ++res.violations;
  }
  return res;
}

// Martingale transform bound |T_sigma f|_p <= (p-1)|f|_p, graded with absolute
// slack, plus the two-point equality case.
SuiteResult suite_burkholder(const VerifyConfig& cfg) {
  SuiteResult res;
  res.tolerance = 1e-12;
  Rng rng = Rng(cfg.seed).child(kSuiteKey + 4);
  const double ps[] = {2.0, 3.0, 4.0, 8.0};

  {  // depth-1 equality case: value meets the p = 2 bound exactly.
    DyadicFunction step = DyadicFunction::zero(1, 1);
    step.samples(0, 0) = 1.0;
    step.samples(0, 1) = -1.0;
    const DyadicFunction out = haar_multiplier(step, HaarSymbol::scaled_identity(1, 1, -1.0));
    const double slack = dyadic_norm_lp(out, 2.0) - dyadic_norm_lp(step, 2.0);
    ++res.trials;
    res.worst = std::max(res.worst, slack);
    if (slack > res.tolerance) ++res.violations;
  }

  const long long total = cfg.trials > 0 ? cfg.trials : 2000;
  for (long long t = 1; t < total; ++t) {
    const int depth = 1 + static_cast<int>(rng.next_u64() % 8);
    const int dim = 1 + static_cast<int>(rng.next_u64() % 4);
    const double p = ps[t % 4];
    const DyadicFunction f = random_dyadic(depth, dim, rng);
    const HaarSymbol sym = HaarSymbol::random(depth, dim, rng);
    const double slack =
        dyadic_norm_lp(haar_multiplier(f, sym), p) - (p - 1.0) * dyadic_norm_lp(f, p);
    ++res.trials;
    res.worst = std::max(res.worst, slack);
    if (slack > res.tolerance) ++res.violations;
  }
  return res;
}

// Bilinear Haar sum against its duality-weighted size bound, plus the
// two-point equality case.
SuiteResult suite_bilinear_haar(const VerifyConfig& cfg) {
  SuiteResult res;
  res.tolerance = 1e-9;
  Rng rng = Rng(cfg.seed).child(kSuiteKey + 5);
  const double ps[] = {2.0, 3.0, 4.0, 8.0};

  {  // two-point pair: sum = 1 = bound at p = 2.
    DyadicFunction step = DyadicFunction::zero(1, 1);
    step.samples(0, 0) = 1.0;
    step.samples(0, 1) = -1.0;
    const double bound = dyadic_norm_lp(step, 2.0) * dyadic_norm_lp(step, 2.0);
    const double slack = (bilinear_haar_sum(step, step) - bound) / bound;
    ++res.trials;
    res.worst = std::max(res.worst, slack);
    if (slack > res.tolerance) ++res.violations;
  }

  const long long total = cfg.trials > 0 ? cfg.trials : 1000;
  for (long long t = 1; t < total; ++t) {
    const int depth = 1 + static_cast<int>(rng.next_u64() % 7);
    const int dim = 1 + static_cast<int>(rng.next_u64() % 3);
    const double p = ps[t % 4];
    const double q = p / (p - 1.0);
    const DyadicFunction f = random_dyadic(depth, dim, rng);
    const DyadicFunction g = random_dyadic(depth, dim, rng);
    const double bound = (p - 1.0) * dyadic_norm_lp(f, p) * dyadic_norm_lp(g, q);
    const double slack = (bilinear_haar_sum(f, g) - bound) / std::max(bound, 1e-300);
    ++res.trials;
    res.worst = std::max(res.worst, slack);
    if (slack > res.tolerance) ++res.violations;
  }
  return res;
}

using SuiteFn = SuiteResult (*)(const VerifyConfig&);

struct SuiteEntry {
  const char* name;
  SuiteFn fn;
};

constexpr SuiteEntry kSuites[] = {
    {"hodge", suite_hodge},           {"multiplier_match", suite_multiplier},
    {"lp_identity", suite_lp_identity}, {"embedding", suite_embedding},
    {"burkholder", suite_burkholder}, {"bilinear_haar", suite_bilinear_haar},
};

}  // namespace

const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& s : kSuites) v.emplace_back(s.name);
    return v;
  }();
  return names;
}

SuiteResult run_suite(const std::string& name, const VerifyConfig& cfg) {
  for (const auto& s : kSuites) {
    if (name == s.name) {
      SuiteResult res = s.fn(cfg);
      res.name = name;
      return res;
    }
  }
  throw std::invalid_argument("unknown verification suite: " + name);
}

std::vector<SuiteResult> run_verification(const VerifyConfig& cfg) {
  std::vector<std::string> selected = cfg.suites;
  if (selected.empty()) selected = verify_suite_names();
  // Reject unknown names up front, in the calling thread.
  const auto& known = verify_suite_names();
  for (const auto& name : selected)
    if (std::find(known.begin(), known.end(), name) == known.end())
      throw std::invalid_argument("unknown verification suite: " + name);

  std::vector<SuiteResult> results(selected.size());
  std::atomic<size_t> next{0};
  const int workers =
      std::max(1, std::min<int>(cfg.jobs, static_cast<int>(selected.size())));
  auto work = [&] {
    for (size_t i = next.fetch_add(1); i < selected.size(); i = next.fetch_add(1))
      results[i] = run_suite(selected[i], cfg);
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return results;
}

}  // namespace baf
