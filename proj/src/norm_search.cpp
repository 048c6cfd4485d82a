#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "baforms/fields.hpp"
#include "baforms/operator.hpp"

namespace baf {

namespace {

// Clean a candidate back into the search space: real samples, zero mean,
// band-limited spectrum.
void project(FormField& f) {
  f.to_rep(Rep::spatial);
  for (auto& c : f.ch)
    for (auto& z : c.v) z = z.real();
  f.to_rep(Rep::frequency);
  for (auto& c : f.ch) {
    remove_mean(c);
    band_limit(c);
  }
  f.to_rep(Rep::spatial);
}

void scale(FormField& f, double a) {
  for (auto& c : f.ch)
    for (auto& z : c.v) z *= a;
}

void axpy(FormField& f, double a, const FormField& d) {
  for (size_t c = 0; c < f.ch.size(); ++c)
    for (size_t i = 0; i < f.ch[c].v.size(); ++i) f.ch[c].v[i] += a * d.ch[c].v[i];
}

// Pointwise q-norm subgradient |h|^{q-2} h, with |h(x)| the Euclidean norm
// across channels.
FormField qnorm_subgradient(const FormField& h, double q) {
  FormField u = h;
  const std::size_t n = h.spec.npoints();
  for (std::size_t i = 0; i < n; ++i) {
    double sq = 0;
    for (const auto& c : h.ch) sq += std::norm(c.v[i]);
    const double w = sq > 0 ? std::pow(sq, (q - 2.0) / 2.0) : 0.0;
    for (auto& c : u.ch) c.v[i] *= w;
  }
  return u;
}

// Gradient of the ratio |S f|_q / |f|_q at a point with |f|_q = 1.  The
// multiplier matrix is symmetric at every frequency, so the adjoint of S is S
// itself; the quotient rule then gives
//   r^{1-q} S[|S f|^{q-2} S f]  -  r |f|^{q-2} f,   r = |S f|_q.
FormField ascent_direction(const FormField& f, const FormField& g, double r, double q) {
  FormField d = apply_operator(qnorm_subgradient(g, q), MultiplierPart::full);
  scale(d, std::pow(r, 1.0 - q));
  axpy(d, -r, qnorm_subgradient(f, q));
  project(d);
  const double dn = std::sqrt(std::real(pairing_l2(d, d)));
  if (dn > 0) scale(d, 1.0 / dn);
  return d;
}

}  // namespace

NormSearchReport norm_search(const GridSpec& spec, int k, double p, int restarts, int budget,
                             std::uint64_t seed) {
  spec.validate();
  if (k < 0 || k > spec.m) throw std::domain_error("form degree k out of range 0..m");
  if (!(p > 1.0)) throw std::domain_error("norm search requires 1 < p < infinity");
  if (restarts < 1 || budget < 1) throw std::domain_error("restarts and budget must be positive");

  NormSearchReport rep;
  rep.m = spec.m;
  rep.k = k;
  rep.p = p;
  const double pstar = std::max(p, p / (p - 1.0));
  rep.bound = spec.m * (pstar - 1.0);
  // The operator is self-adjoint, so its norm on L^p equals its norm on the
  // dual exponent; for p < 2 the ascent runs on the dual side, where the
  // q-norm subgradient stays bounded.
  const double q = std::max(p, p / (p - 1.0));
  rep.search_exponent = q;

  Rng root(seed);

  auto ratio = [&](const FormField& f) {
    const double nf = norm_lp(f, q);
    if (!(nf > 0)) return 0.0;
    FormField g = apply_operator(f, MultiplierPart::full);
    const double r = norm_lp(g, q) / nf;
    ++rep.evaluations;
    rep.max_evaluated = std::max(rep.max_evaluated, r);
    return r;
  };

  for (int rs = 0; rs < restarts; ++rs) {
    Rng rng(root.child(static_cast<std::uint64_t>(rs)));
    FormField f = random_form_field(spec, k, rng);
    scale(f, 1.0 / norm_lp(f, q));
    double cur = ratio(f);
    if (cur > rep.best_ratio) {
      rep.best_ratio = cur;
      rep.trace.emplace_back(rep.evaluations, cur);
    }
    double step = 0.5;
    for (int it = 0; it < budget && step > 1e-12; ++it) {
      FormField g = apply_operator(f, MultiplierPart::full);
      FormField d = ascent_direction(f, g, cur, q);
      FormField cand = f;
      axpy(cand, step, d);
      project(cand);
      const double cn = norm_lp(cand, q);
      if (!(cn > 0)) {
        step *= 0.5;
        continue;
      }
      scale(cand, 1.0 / cn);
      const double r = ratio(cand);
      if (r > cur) {
        f = cand;
        cur = r;
        step = std::min(step * 1.2, 1.0);
        if (r > rep.best_ratio) {
          rep.best_ratio = r;
          rep.trace.emplace_back(rep.evaluations, r);
        }
      } else {
        step *= 0.5;
      }
    }
  }

  rep.violated = rep.max_evaluated > rep.bound + 1e-9;
  return rep;
}

}  // namespace baf
