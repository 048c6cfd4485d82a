#include "baforms/bellman.hpp"

#include <cmath>
#include <stdexcept>

namespace baf {

namespace {

double pth_mean(const Eigen::MatrixXd& samples, double p) {
  double acc = 0;
  for (Eigen::Index c = 0; c < samples.cols(); ++c)
    acc += std::pow(samples.col(c).norm(), p);
  return acc / static_cast<double>(samples.cols());
}

}  // namespace

bool BellmanPoint::feasible() const {
  if (!(p >= 2.0) || Xi <= 0 || Gamma <= 0) return false;
  if (xi.size() == 0 || xi.size() != gamma.size()) return false;
  return std::pow(xi.norm(), p) < Xi && std::pow(gamma.norm(), q()) < Gamma;
}

void BellmanPoint::validate() const {
  if (!(p >= 2.0)) throw std::invalid_argument("bellman: exponent must satisfy p >= 2");
  if (xi.size() == 0 || xi.size() != gamma.size())
    throw std::invalid_argument("bellman: xi and gamma must be nonempty with equal dimension");
  if (Xi <= 0 || Gamma <= 0) throw std::invalid_argument("bellman: Xi and Gamma must be positive");
  if (!(std::pow(xi.norm(), p) < Xi))
    throw std::invalid_argument("bellman: point not in the strict domain (|xi|^p >= Xi)");
  if (!(std::pow(gamma.norm(), q()) < Gamma))
    throw std::invalid_argument("bellman: point not in the strict domain (|gamma|^q >= Gamma)");
}

bool constrained_sample(const Eigen::VectorXd& xi, double target, double p, int depth, Rng& rng,
                        DyadicFunction& out) {
  const Eigen::Index dim = xi.size();
  const Eigen::Index n = Eigen::Index(1) << depth;
  Eigen::MatrixXd eta(dim, n);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index c = 0; c < n; ++c) eta(i, c) = rng.uniform(-1.0, 1.0);
  eta.colwise() -= Eigen::VectorXd(eta.rowwise().mean());
  if (eta.norm() < 1e-12) return false;

  Eigen::MatrixXd base = xi.replicate(1, n);
  auto phi = [&](double s) { return pth_mean(base + s * eta, p); };
  // phi is convex with phi'(0) = 0 (eta is mean-free), so it is nondecreasing
  // on s >= 0; bracket the level, then bisect.
  double hi = 1.0;
  int grow = 0;
  while (phi(hi) < target && grow++ < 200) hi *= 2.0;
  if (phi(hi) < target) return false;
  double lo = 0.0;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    (phi(mid) < target ? lo : hi) = mid;
  }
  const double s = 0.5 * (lo + hi);
  if (std::abs(phi(s) - target) > 1e-10 * std::max(1.0, target)) return false;
  out.depth = depth;
  out.dim_E = static_cast<int>(dim);
  out.samples = base + s * eta;
  return true;
}

BellmanProbeResult bellman_probe(const BellmanPoint& a, int depth_cap, int budget,
                                 std::uint64_t seed) {
  a.validate();
  if (depth_cap < 0 || depth_cap > 16)
    throw std::invalid_argument("bellman_probe: depth_cap must lie in [0, 16]");
  if (budget < 1) throw std::invalid_argument("bellman_probe: budget must be >= 1");

  BellmanProbeResult res;
  const double q = a.q();
  res.size_bound = (a.p - 1.0) * std::pow(a.Xi, 1.0 / a.p) * std::pow(a.Gamma, 1.0 / q);

  const int dim = static_cast<int>(a.xi.size());
  res.witness.f = DyadicFunction::constant(a.xi, 0);
  res.witness.g = DyadicFunction::constant(a.gamma, 0);
  if (depth_cap == 0) {
    // Only constant candidates exist; their bilinear sum is 0, a valid lower
    // estimate since B >= 0 on the whole domain.
    res.value = 0;
    res.samples = 1;
    return res;
  }

  const Rng root(seed);
  double best = -1.0;
  for (int i = 0; i < budget; ++i) {
    for (int d = 1; d <= depth_cap; ++d) {
      const Rng sub = root.child((static_cast<std::uint64_t>(i) << 8) | static_cast<std::uint64_t>(d));
      Rng rf = sub.child(1), rg = sub.child(2);
      DyadicFunction f = DyadicFunction::zero(0, dim), g = DyadicFunction::zero(0, dim);
      if (!constrained_sample(a.xi, a.Xi, a.p, d, rf, f)) continue;
      if (!constrained_sample(a.gamma, a.Gamma, q, d, rg, g)) continue;
      ++res.samples;
      const double v = bilinear_haar_sum(f, g);
      if (v > best) {
        best = v;
        res.witness = BellmanWitness{f, g};
      }
    }
  }
  if (res.samples == 0) {
    res.no_sample = true;
    res.value = 0;
  } else {
    res.value = std::max(best, 0.0);
  }
  return res;
}

DyadicFunction refine(const DyadicFunction& f, int target_depth) {
  if (target_depth < f.depth) throw std::invalid_argument("refine: target depth below current");
  if (target_depth == f.depth) return f;
  const Eigen::Index rep = Eigen::Index(1) << (target_depth - f.depth);
  DyadicFunction out = DyadicFunction::zero(target_depth, f.dim_E);
  for (Eigen::Index c = 0; c < f.samples.cols(); ++c)
    for (Eigen::Index r = 0; r < rep; ++r) out.samples.col(c * rep + r) = f.samples.col(c);
  return out;
}

namespace {

DyadicFunction concat_halves(const DyadicFunction& lo, const DyadicFunction& hi) {
  if (lo.dim_E != hi.dim_E)
    throw std::invalid_argument("bellman_concat: halves differ in value dimension");
  const int d = std::max(lo.depth, hi.depth);
  const DyadicFunction a = refine(lo, d), b = refine(hi, d);
  DyadicFunction out = DyadicFunction::zero(d + 1, lo.dim_E);
  out.samples << a.samples, b.samples;
  return out;
}

}  // namespace

ConcatResult bellman_concat(const BellmanWitness& minus, const BellmanWitness& plus) {
  ConcatResult res;
  res.witness.f = concat_halves(minus.f, plus.f);
  res.witness.g = concat_halves(minus.g, plus.g);
  res.concat_sum = bilinear_haar_sum(res.witness.f, res.witness.g);
  res.top_term = 0.25 * (dyadic_mean(plus.f) - dyadic_mean(minus.f)).norm() *
                 (dyadic_mean(plus.g) - dyadic_mean(minus.g)).norm();
  res.halves_average = 0.5 * (bilinear_haar_sum(minus.f, minus.g) + bilinear_haar_sum(plus.f, plus.g));
  return res;
}

}  // namespace baf
