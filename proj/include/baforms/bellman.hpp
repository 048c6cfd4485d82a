// Lower-estimate probing of the bilinear Bellman function
//
//   B(Xi, Gamma, xi, gamma) = sup { bilinear_haar_sum(f, g) :
//       <f> = xi, <g> = gamma, <|f|^p> = Xi, <|g|^q> = Gamma }
//
// by constrained random sampling plus a concatenation move.  A sample is
// built as xi + s * (mean-free noise) with s chosen by monotone root-finding
// so the p-average lands on Xi; the map s -> <|xi + s eta|^p> is convex with
// a critical point at 0, hence nondecreasing on s >= 0 and crossing every
// level above |xi|^p exactly once as soon as it is strictly increasing.
// The concatenation of witnesses for a_minus and a_plus — one per half of
// [0,1) — is a witness for the midpoint point whose bilinear sum splits as
//   (1/4)|xi_+ - xi_-||gamma_+ - gamma_-| + (S_- + S_+)/2,
// the mechanism behind the midpoint-concavity property.
//
// Every reported value is a lower estimate for the sup, never the sup itself.
#pragma once

#include "baforms/haar.hpp"

namespace baf {

struct BellmanPoint {
  double Xi = 0, Gamma = 0;
  Eigen::VectorXd xi, gamma;
  double p = 2;

  double q() const { return p / (p - 1.0); }
  // Strict interior of the domain: |xi|^p < Xi and |gamma|^q < Gamma.
  bool feasible() const;
  void validate() const;
};

struct BellmanWitness {
  DyadicFunction f, g;
};

struct BellmanProbeResult {
  double value = 0;       // the lower estimate
  double size_bound = 0;  // (p-1) Xi^{1/p} Gamma^{1/q}
  long long samples = 0;  // admissible pairs actually evaluated
  bool no_sample = false; // constraint solving failed for every candidate
  BellmanWitness witness; // best pair found (constants when depth_cap = 0)
};

// Candidates are indexed by (trial, depth) with depth <= depth_cap and trial
// < budget, each with its own child seed, so enlarging either bound only adds
// candidates: estimates are nondecreasing in both.
BellmanProbeResult bellman_probe(const BellmanPoint& a, int depth_cap, int budget,
                                 std::uint64_t seed);

struct ConcatResult {
  double concat_sum = 0;      // bilinear sum of the concatenated pair
  double top_term = 0;        // (1/4)|xi_+ - xi_-||gamma_+ - gamma_-|
  double halves_average = 0;  // (S_- + S_+)/2
  BellmanWitness witness;
};

// Concatenate two witness pairs (minus on [0, 1/2), plus on [1/2, 1)).
ConcatResult bellman_concat(const BellmanWitness& minus, const BellmanWitness& plus);

// Constant-on-cells refinement to a deeper grid; preserves every dyadic
// average and the bilinear sum.
DyadicFunction refine(const DyadicFunction& f, int target_depth);

// Build f = xi + s * (eta - <eta>) with <|f|^p> = target, solving for s by
// bracketing + bisection.  Returns false when no admissible scaling is found
// (degenerate noise draw).
bool constrained_sample(const Eigen::VectorXd& xi, double target, double p, int depth, Rng& rng,
                        DyadicFunction& out);

}  // namespace baf
