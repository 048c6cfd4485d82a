#include "baforms/haar.hpp"

#include <cmath>
#include <stdexcept>

namespace baf {

namespace {

void check_shape(int depth, int dim_E) {
  if (depth < 0 || depth > 24) throw std::domain_error("dyadic depth must be in 0..24");
  if (dim_E < 1) throw std::domain_error("value dimension must be positive");
}

// All cell averages, generation by generation: out[g] is dim_E x 2^g.
std::vector<Eigen::MatrixXd> average_pyramid(const DyadicFunction& f) {
  std::vector<Eigen::MatrixXd> out(static_cast<size_t>(f.depth) + 1);
  out[static_cast<size_t>(f.depth)] = f.samples;
  for (int g = f.depth - 1; g >= 0; --g) {
    const Eigen::MatrixXd& fine = out[static_cast<size_t>(g) + 1];
    Eigen::MatrixXd& coarse = out[static_cast<size_t>(g)];
    coarse.resize(f.dim_E, 1LL << g);
    for (long long j = 0; j < (1LL << g); ++j)
      coarse.col(j) = 0.5 * (fine.col(2 * j) + fine.col(2 * j + 1));
  }
  return out;
}

}  // namespace

DyadicFunction DyadicFunction::zero(int depth, int dim_E) {
  check_shape(depth, dim_E);
  DyadicFunction f;
  f.depth = depth;
  f.dim_E = dim_E;
  f.samples = Eigen::MatrixXd::Zero(dim_E, 1LL << depth);
  return f;
}

DyadicFunction DyadicFunction::constant(const Eigen::VectorXd& value, int depth) {
  DyadicFunction f = zero(depth, static_cast<int>(value.size()));
  f.samples.colwise() = value;
  return f;
}

Eigen::VectorXd DyadicFunction::cell_average(int gen, long long idx) const {
  if (gen < 0 || gen > depth) throw std::domain_error("cell generation out of range");
  if (idx < 0 || idx >= (1LL << gen)) throw std::domain_error("cell index out of range");
  const long long span = 1LL << (depth - gen);
  Eigen::VectorXd s = Eigen::VectorXd::Zero(dim_E);
  for (long long j = idx * span; j < (idx + 1) * span; ++j) s += samples.col(j);
  return s / static_cast<double>(span);
}

Eigen::VectorXd dyadic_mean(const DyadicFunction& f) { return f.cell_average(0, 0); }

double dyadic_norm_lp(const DyadicFunction& f, double p) {
  if (!(p >= 1)) throw std::domain_error("p-norm requires p >= 1");
  double acc = 0;
  for (long long j = 0; j < f.cells(); ++j) acc += std::pow(f.samples.col(j).norm(), p);
  return std::pow(acc / static_cast<double>(f.cells()), 1.0 / p);
}

Eigen::VectorXd haar_coefficient(const DyadicFunction& f, const DyadicInterval& I) {
  if (I.gen < 0 || I.gen >= f.depth)
    throw std::domain_error("haar coefficient needs an interval strictly above sample depth");
  if (I.idx < 0 || I.idx >= (1LL << I.gen)) throw std::domain_error("interval outside [0,1)");
  const double root_len = std::pow(2.0, -0.5 * I.gen);
  return 0.5 * root_len *
         (f.cell_average(I.gen + 1, 2 * I.idx + 1) - f.cell_average(I.gen + 1, 2 * I.idx));
}

HaarSymbol HaarSymbol::identity(int depth, int dim_E) { return scaled_identity(depth, dim_E, 1.0); }

HaarSymbol HaarSymbol::scaled_identity(int depth, int dim_E, double s) {
  check_shape(depth, dim_E);
  HaarSymbol sym;
  sym.depth = depth;
  sym.dim_E = dim_E;
  sym.sigma.assign(static_cast<size_t>((1LL << depth) - 1),
                   s * Eigen::MatrixXd::Identity(dim_E, dim_E));
  return sym;
}

HaarSymbol HaarSymbol::random(int depth, int dim_E, Rng& rng) {
  HaarSymbol sym = identity(depth, dim_E);
  for (auto& s : sym.sigma) s = random_orthogonal(dim_E, rng);
  return sym;
}

const Eigen::MatrixXd& HaarSymbol::at(int gen, long long idx) const {
  if (gen < 0 || gen >= depth || idx < 0 || idx >= (1LL << gen))
    throw std::domain_error("symbol interval out of range");
  return sigma[static_cast<size_t>((1LL << gen) - 1 + idx)];
}

void HaarSymbol::validate() const {
  if (static_cast<long long>(sigma.size()) != (1LL << depth) - 1)
    throw std::domain_error("symbol entry count must cover every interval");
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(dim_E, dim_E);
  for (const auto& s : sigma) {
    if (s.rows() != dim_E || s.cols() != dim_E)
      throw std::domain_error("symbol entry has wrong dimensions");
    if ((s.transpose() * s - id).cwiseAbs().maxCoeff() > 1e-12)
      throw std::domain_error("symbol entries must be orthogonal");
  }
}

DyadicFunction haar_multiplier(const DyadicFunction& f, const HaarSymbol& symbol) {
  if (symbol.depth != f.depth || symbol.dim_E != f.dim_E)
    throw std::domain_error("symbol and function shapes must agree");
  symbol.validate();

  const auto avg = average_pyramid(f);
  DyadicFunction out = DyadicFunction::zero(f.depth, f.dim_E);
  // h_I is constant on each cell below it, so each output cell sums one term
  // per ancestor interval.
  for (long long cell = 0; cell < f.cells(); ++cell) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(f.dim_E);
    for (int g = 0; g < f.depth; ++g) {
      const long long idx = cell >> (f.depth - g);  // ancestor at generation g
      const double root_len = std::pow(2.0, -0.5 * g);
      const Eigen::VectorXd coef =
          0.5 * root_len * (avg[static_cast<size_t>(g) + 1].col(2 * idx + 1) -
                            avg[static_cast<size_t>(g) + 1].col(2 * idx));
      const bool right = (cell >> (f.depth - g - 1)) & 1;
      const double h = (right ? 1.0 : -1.0) / root_len;  // +-|I|^{-1/2}
      v += h * (symbol.at(g, idx) * coef);
    }
    out.samples.col(cell) = v;
  }
  return out;
}

double bilinear_haar_sum(const DyadicFunction& f, const DyadicFunction& g) {
  if (f.depth != g.depth || f.dim_E != g.dim_E)
    throw std::domain_error("bilinear sum needs matching shapes");
  const auto af = average_pyramid(f);
  const auto ag = average_pyramid(g);
  double acc = 0;
  for (int gen = 0; gen < f.depth; ++gen) {
    const double len = std::pow(2.0, -gen);
    for (long long j = 0; j < (1LL << gen); ++j) {
      const double df = (af[static_cast<size_t>(gen) + 1].col(2 * j + 1) -
                         af[static_cast<size_t>(gen) + 1].col(2 * j))
                            .norm();
      const double dg = (ag[static_cast<size_t>(gen) + 1].col(2 * j + 1) -
                         ag[static_cast<size_t>(gen) + 1].col(2 * j))
                            .norm();
      acc += len * df * dg;
    }
  }
  return 0.25 * acc;
}

DyadicFunction random_dyadic(int depth, int dim_E, Rng& rng) {
  DyadicFunction f = DyadicFunction::zero(depth, dim_E);
  for (long long j = 0; j < f.cells(); ++j)
    for (int c = 0; c < dim_E; ++c) f.samples(c, j) = rng.uniform(-1.0, 1.0);
  return f;
}

Eigen::MatrixXd random_orthogonal(int dim, Rng& rng) {
  if (dim < 1) throw std::domain_error("dimension must be positive");
  Eigen::MatrixXd a(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) a(r, c) = rng.gaussian();
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < dim; ++c)
    if (r(c, c) < 0) q.col(c) *= -1.0;
  return q;
}

}  // namespace baf
