// Dyadic step functions on [0,1) with vector values, the Haar system, Haar
// multipliers with orthogonal symbols, and the bilinear average-difference
// sum those multipliers are controlled by.
//
// Conventions.  Cells at generation g are [j 2^-g, (j+1) 2^-g).  The Haar
// function of an interval I is -|I|^{-1/2} on the left half and +|I|^{-1/2}
// on the right half, so that <f, h_I> = (|I|^{1/2}/2)(<f>_right - <f>_left).
// Values live in E = R^dim_E; "unitary" symbols are real orthogonal matrices.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "baforms/rng.hpp"

namespace baf {

struct DyadicInterval {
  int gen = 0;        // generation: |I| = 2^-gen
  long long idx = 0;  // position: I = [idx 2^-gen, (idx+1) 2^-gen)
};

struct DyadicFunction {
  int depth = 0;  // samples are constant on generation-`depth` cells
  int dim_E = 1;
  Eigen::MatrixXd samples;  // dim_E x 2^depth, one column per cell

  static DyadicFunction zero(int depth, int dim_E);
  static DyadicFunction constant(const Eigen::VectorXd& value, int depth);
  long long cells() const { return 1LL << depth; }
  // Average over a dyadic cell of generation <= depth.
  Eigen::VectorXd cell_average(int gen, long long idx) const;
};

// <f>_J, the global mean.
Eigen::VectorXd dyadic_mean(const DyadicFunction& f);

// (<|f|^p>)^{1/p}, the L^p([0,1], E) norm.
double dyadic_norm_lp(const DyadicFunction& f, double p);

// <f, h_I>; requires gen(I) < depth.
Eigen::VectorXd haar_coefficient(const DyadicFunction& f, const DyadicInterval& I);

// One orthogonal matrix per dyadic interval of generation < depth, stored
// breadth-first (offset 2^gen - 1 + idx).
struct HaarSymbol {
  int depth = 0;
  int dim_E = 1;
  std::vector<Eigen::MatrixXd> sigma;

  static HaarSymbol identity(int depth, int dim_E);
  static HaarSymbol scaled_identity(int depth, int dim_E, double s);  // s = +-1
  static HaarSymbol random(int depth, int dim_E, Rng& rng);
  const Eigen::MatrixXd& at(int gen, long long idx) const;
  void validate() const;  // throws unless every matrix is orthogonal to 1e-12
};

// T_sigma f = sum_I sigma_I <f, h_I> h_I  (the mean term is dropped).
DyadicFunction haar_multiplier(const DyadicFunction& f, const HaarSymbol& symbol);

// (1/4) sum_I |I| |<f>_right - <f>_left| |<g>_right - <g>_left| over all
// intervals of generation < depth.
double bilinear_haar_sum(const DyadicFunction& f, const DyadicFunction& g);

// Haar-orthogonalized uniform noise: each sample component uniform in [-1,1].
DyadicFunction random_dyadic(int depth, int dim_E, Rng& rng);

// Haar-distributed real orthogonal matrix (QR with the sign fix).
Eigen::MatrixXd random_orthogonal(int dim, Rng& rng);

}  // namespace baf
