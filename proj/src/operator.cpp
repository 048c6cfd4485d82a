#include "baforms/operator.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace baf {

namespace {

double g_perturbation = 0.0;

int popcount_below(std::uint32_t mask, int p) {
  return std::popcount(mask & ((1u << (p - 1)) - 1u));
}

}  // namespace

void set_multiplier_perturbation(double eps) { g_perturbation = eps; }
double multiplier_perturbation() { return g_perturbation; }

double multiplier_entry(const MultiIndex& i, const MultiIndex& j, const Eigen::VectorXd& xi) {
  if (i.m != j.m || i.degree() != j.degree())
    throw std::domain_error("multiplier entry requires matching (m, k)");
  if (i.m != static_cast<int>(xi.size()))
    throw std::domain_error("frequency vector length must equal m");
  const double n2 = xi.squaredNorm();
  if (n2 == 0.0) throw std::domain_error("multiplier undefined at xi = 0");

  double value = 0.0;
  if (i.mask == j.mask) {
    double s = 0;
    for (int l = 1; l <= i.m; ++l) {
      const double x2 = xi[l - 1] * xi[l - 1];
      s += (i.mask & (1u << (l - 1))) ? -x2 : x2;
    }
    value = s / n2;
  } else {
    const std::uint32_t only_i = i.mask & ~j.mask;
    const std::uint32_t only_j = j.mask & ~i.mask;
    if (std::popcount(only_i) == 1 && std::popcount(only_j) == 1) {
      const int p = std::countr_zero(only_i) + 1;
      const int q = std::countr_zero(only_j) + 1;
      const std::uint32_t shared = i.mask & j.mask;
      const int alpha = popcount_below(shared, p);
      const int beta = popcount_below(shared, q);
      const double sign = ((alpha + beta) % 2 == 0) ? 1.0 : -1.0;
      value = -2.0 * sign * xi[p - 1] * xi[q - 1] / n2;
    }
  }
  return value + g_perturbation;
}

Eigen::MatrixXd build_multiplier(int m, int k, const Eigen::VectorXd& xi, MultiplierRoute route) {
  if (static_cast<int>(xi.size()) != m)
    throw std::domain_error("frequency vector length must equal m");
  if (xi.squaredNorm() == 0.0) throw std::domain_error("multiplier undefined at xi = 0");
  const auto basis = enumerate_multi_indices(m, k);
  const Eigen::Index dim = static_cast<Eigen::Index>(basis.size());

  if (route == MultiplierRoute::wedge) {
    // ([xi]^t [xi] - [xi][xi]^t) / |xi|^2 restricted to degree k
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(dim, dim);
    if (k < m) {
      const Eigen::MatrixXd up = wedge_block(xi, k);
      M += up.transpose() * up;
    }
    if (k > 0) {
      const Eigen::MatrixXd down = wedge_block(xi, k - 1);
      M -= down * down.transpose();
    }
    return M / xi.squaredNorm();
  }

  Eigen::MatrixXd M(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c)
      M(r, c) = multiplier_entry(basis[static_cast<size_t>(r)], basis[static_cast<size_t>(c)], xi);
  return M;
}

namespace {

// Adjacency data for one off-diagonal entry: source channel, axes p, q and
// the permutation sign of the shared set.
struct OffdiagTerm {
  int row, col;
  int p, q;
  double sign;
};

std::vector<OffdiagTerm> offdiag_terms(int m, int k) {
  std::vector<OffdiagTerm> out;
  const auto basis = enumerate_multi_indices(m, k);
  for (size_t r = 0; r < basis.size(); ++r)
    for (size_t c = 0; c < basis.size(); ++c) {
      if (r == c) continue;
      const std::uint32_t only_r = basis[r].mask & ~basis[c].mask;
      const std::uint32_t only_c = basis[c].mask & ~basis[r].mask;
      if (std::popcount(only_r) != 1 || std::popcount(only_c) != 1) continue;
      const int p = std::countr_zero(only_r) + 1;
      const int q = std::countr_zero(only_c) + 1;
      const std::uint32_t shared = basis[r].mask & basis[c].mask;
      const int alpha = popcount_below(shared, p);
      const int beta = popcount_below(shared, q);
      out.push_back({static_cast<int>(r), static_cast<int>(c), p, q,
                     ((alpha + beta) % 2 == 0) ? 1.0 : -1.0});
    }
  return out;
}

}  // namespace

FormField apply_operator(const FormField& f, MultiplierPart part) {
  const Rep orig = f.rep();
  FormField g = f;
  g.to_rep(Rep::frequency);

  const int m = f.spec.m;
  const int dim = f.dim();
  const std::size_t npts = f.spec.npoints();
  Eigen::VectorXd xi(m);
  Eigen::VectorXcd in(dim), out(dim);
  double xibuf[12];

  FormField h = FormField::zero(f.spec, f.k, Rep::frequency);
  for (std::size_t idx = 0; idx < npts; ++idx) {
    frequency_vector(f.spec, idx, xibuf);
    bool zero = true;
    for (int a = 0; a < m; ++a) {
      xi[a] = xibuf[a];
      if (xibuf[a] != 0.0) zero = false;
    }
    if (zero) continue;  // mean annihilated
    Eigen::MatrixXd M = build_multiplier(m, f.k, xi, MultiplierRoute::entry);
    if (part != MultiplierPart::full) {
      const Eigen::VectorXd diag = M.diagonal();
      if (part == MultiplierPart::diagonal)
        M = Eigen::MatrixXd(diag.asDiagonal());
      else
        M -= Eigen::MatrixXd(diag.asDiagonal());
    }
    for (int c = 0; c < dim; ++c) in[c] = g.ch[static_cast<size_t>(c)].v[idx];
    out.noalias() = M * in;
    for (int c = 0; c < dim; ++c) h.ch[static_cast<size_t>(c)].v[idx] = out[c];
  }
  h.to_rep(orig);
  return h;
}

FormField apply_operator_riesz(const FormField& f, MultiplierPart part) {
  const Rep orig = f.rep();
  FormField g = f;
  g.to_rep(Rep::frequency);  // stay spectral: Riesz composition is then exact and cheap

  const int m = f.spec.m;
  const auto basis = enumerate_multi_indices(m, f.k);
  FormField h = FormField::zero(f.spec, f.k, Rep::frequency);

  if (part != MultiplierPart::offdiag) {
    for (size_t c = 0; c < basis.size(); ++c) {
      // sum_{p in i} R_p^2 - sum_{q not in i} R_q^2 on the channel itself
      for (int l = 1; l <= m; ++l) {
        const bool inside = basis[c].mask & (1u << (l - 1));
        ScalarField term = riesz(riesz(g.ch[c], l), l);
        const double s = inside ? 1.0 : -1.0;
        for (std::size_t i = 0; i < term.v.size(); ++i) h.ch[c].v[i] += s * term.v[i];
      }
    }
  }
  if (part != MultiplierPart::diagonal) {
    for (const auto& t : offdiag_terms(m, f.k)) {
      ScalarField term = riesz(riesz(g.ch[static_cast<size_t>(t.col)], t.p), t.q);
      const double s = 2.0 * t.sign;
      auto& dst = h.ch[static_cast<size_t>(t.row)];
      for (std::size_t i = 0; i < term.v.size(); ++i) dst.v[i] += s * term.v[i];
    }
  }
  h.to_rep(orig);
  return h;
}

long long offdiag_term_count(int m, int k) {
  if (k < 0 || k > m) throw std::domain_error("offdiag_term_count: k out of range");
  const long long count = 2 * binomial(m, k) * (m - k) * k;
  if (k >= 1 && k <= m - 1) {
    // same count through the row-length formula m(m-1) * 2 * C(m-2, k-1)
    auto fact = [](int n) {
      long long f = 1;
      for (int i = 2; i <= n; ++i) f *= i;
      return f;
    };
    const long long alt =
        static_cast<long long>(m) * (m - 1) * 2 * fact(m - 2) / (fact(m - k - 1) * fact(k - 1));
    if (alt != count) throw std::logic_error("off-diagonal term count formulas disagree");
  }
  return count;
}

}  // namespace baf
