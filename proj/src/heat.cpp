#include "baforms/heat.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "baforms/operator.hpp"

namespace baf {

namespace {

void require_same_shape(const FormField& a, const FormField& b, const char* who) {
  if (!(a.spec == b.spec) || a.k != b.k)
    throw std::domain_error(std::string(who) + ": fields must share grid and degree");
}

void require_mean_zero(const FormField& f, const char* who) {
  double scale = 0;
  for (const auto& c : f.ch)
    for (const auto& z : c.v) scale = std::max(scale, std::abs(z));
  for (const auto& c : f.ch)
    if (std::abs(mean_value(c)) > 1e-8 * std::max(1.0, scale))
      throw std::domain_error(std::string(who) + ": fields must be mean-zero");
}

// Per-axis gradient-norm grids of the heat extension at height t:
// out[i][x] = Euclidean norm over channels of (d_i f~)(x, t).
// f must be in frequency representation.
std::vector<std::vector<double>> axis_norm_grids(const FormField& f, double t) {
  const int m = f.spec.m;
  const std::size_t n = f.spec.npoints();
  std::vector<std::vector<double>> out(static_cast<size_t>(m),
                                       std::vector<double>(n, 0.0));
  for (const auto& c : f.ch) {
    const ScalarField ext = heat_extend(c, t);
    for (int i = 1; i <= m; ++i) {
      ScalarField d = transform(partial_derivative(ext, i), Rep::spatial);
      auto& grid = out[static_cast<size_t>(i - 1)];
      for (std::size_t x = 0; x < n; ++x) grid[x] += std::norm(d.v[x]);
    }
  }
  for (auto& grid : out)
    for (double& v : grid) v = std::sqrt(v);
  return out;
}

}  // namespace

Quadrature make_quadrature(int n, double T, double decay_scale) {
  if (n < 12) throw std::domain_error("quadrature needs at least 12 nodes");
  if (!(T >= 1)) throw std::domain_error("quadrature truncation T must be >= 1");
  if (!(decay_scale > 0)) throw std::domain_error("decay scale must be positive");

  const double t_head = std::min(0.1 / decay_scale, T / 10.0);
  int n_head = std::max(2, n / 4);
  int n_body = n - n_head;
  n_head += n_body % 3;  // body splits into 3-node panels
  n_body -= n_body % 3;

  Quadrature q;
  q.T = T;
  q.t.reserve(static_cast<size_t>(n));
  q.w.reserve(static_cast<size_t>(n));

  const double h = t_head / n_head;
  for (int i = 0; i < n_head; ++i) {
    q.t.push_back((i + 0.5) * h);
    q.w.push_back(h);
  }
  static const double gx = std::sqrt(3.0 / 5.0);
  static const double gl_x[3] = {-gx, 0.0, gx};
  static const double gl_w[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  const double u0 = std::log(t_head), u1 = std::log(T);
  const int panels = n_body / 3;
  const double du = (u1 - u0) / panels;
  for (int p = 0; p < panels; ++p) {
    const double c = u0 + (p + 0.5) * du, hh = du / 2.0;
    for (int j = 0; j < 3; ++j) {
      const double u = c + gl_x[j] * hh;
      q.t.push_back(std::exp(u));
      q.w.push_back(gl_w[j] * hh * std::exp(u));  // dt = t du
    }
  }
  return q;
}

Quadrature field_quadrature(const FormField& a, const FormField& b, int n) {
  require_same_shape(a, b, "field_quadrature");
  const double T = 6.0 / min_freq_sq(a.spec);
  double s = std::max(active_freq_sq(a), active_freq_sq(b));
  if (s <= 0) s = max_freq_sq(a.spec);
  return make_quadrature(n, std::max(T, 1.0), 2.0 * s);
}

HeatSlice heat_slice(const FormField& f, double t) {
  if (t < 0) throw std::domain_error("heat slice requires t >= 0");
  HeatSlice s;
  s.t = t;
  FormField g = f;
  g.to_rep(Rep::frequency);
  s.field = FormField::zero(f.spec, f.k, Rep::frequency);
  for (size_t c = 0; c < g.ch.size(); ++c) s.field.ch[c] = heat_extend(g.ch[c], t);
  s.derivatives.reserve(static_cast<size_t>(f.spec.m));
  for (int i = 1; i <= f.spec.m; ++i) {
    FormField d = FormField::zero(f.spec, f.k, Rep::frequency);
    for (size_t c = 0; c < g.ch.size(); ++c) d.ch[c] = partial_derivative(s.field.ch[c], i);
    d.to_rep(Rep::spatial);
    s.derivatives.push_back(std::move(d));
  }
  s.field.to_rep(Rep::spatial);
  return s;
}

PairingIdentityResult lp_pairing_identity(const FormField& phi, const FormField& psi, int j, int k,
                                          const Quadrature& quad) {
  require_same_shape(phi, psi, "lp_pairing_identity");
  if (j < 1 || j > phi.spec.m || k < 1 || k > phi.spec.m)
    throw std::domain_error("lp_pairing_identity: axis out of range");
  require_mean_zero(phi, "lp_pairing_identity");
  require_mean_zero(psi, "lp_pairing_identity");

  PairingIdentityResult res;

  // lhs through actual Riesz compositions and a spatial pairing
  {
    FormField rr = phi;
    rr.to_rep(Rep::frequency);
    for (auto& c : rr.ch) c = riesz(riesz(c, j), k);
    rr.to_rep(Rep::spatial);
    FormField ps = psi;
    ps.to_rep(Rep::spatial);
    res.lhs = std::real(pairing_l2(rr, ps));
  }

  FormField pf = phi, qf = psi;
  pf.to_rep(Rep::frequency);
  qf.to_rep(Rep::frequency);

  // exact t-integral per mode: 2 int_0^inf xi_j xi_k e^{-2t|xi|^2} dt
  //                          = xi_j xi_k / |xi|^2
  {
    const double vol = phi.spec.volume();
    double xi[12];
    std::complex<double> acc = 0;
    const std::size_t n = phi.spec.npoints();
    for (std::size_t idx = 0; idx < n; ++idx) {
      frequency_vector(phi.spec, idx, xi);
      double n2 = 0;
      for (int a = 0; a < phi.spec.m; ++a) n2 += xi[a] * xi[a];
      if (n2 == 0) continue;
      std::complex<double> ch = 0;
      for (size_t c = 0; c < pf.ch.size(); ++c)
        ch += pf.ch[c].v[idx] * std::conj(qf.ch[c].v[idx]);
      acc += xi[j - 1] * xi[k - 1] / n2 * ch;
    }
    res.rhs_analytic = -std::real(acc) * vol;
  }

  // quadrature over heat slices, paired in physical space
  {
    double acc = 0;
    for (size_t node = 0; node < quad.t.size(); ++node) {
      const double t = quad.t[node];
      std::complex<double> slice = 0;
      for (size_t c = 0; c < pf.ch.size(); ++c) {
        ScalarField dj = transform(partial_derivative(heat_extend(pf.ch[c], t), j), Rep::spatial);
        ScalarField dk = transform(partial_derivative(heat_extend(qf.ch[c], t), k), Rep::spatial);
        std::complex<double> s = 0;
        for (std::size_t x = 0; x < dj.v.size(); ++x) s += dj.v[x] * std::conj(dk.v[x]);
        slice += s * phi.spec.cell_volume();
      }
      acc += quad.w[node] * std::real(slice);
    }
    res.rhs_quadrature = -2.0 * acc;
  }
  return res;
}

double embedding_lhs(const FormField& phi, const FormField& psi, const Quadrature& quad) {
  require_same_shape(phi, psi, "embedding_lhs");
  FormField pf = phi, qf = psi;
  pf.to_rep(Rep::frequency);
  qf.to_rep(Rep::frequency);
  const std::size_t n = phi.spec.npoints();
  const int m = phi.spec.m;
  double acc = 0;
  for (size_t node = 0; node < quad.t.size(); ++node) {
    const auto a = axis_norm_grids(pf, quad.t[node]);
    const auto b = axis_norm_grids(qf, quad.t[node]);
    double slice = 0;
    for (std::size_t x = 0; x < n; ++x) {
      double sa = 0, sb = 0;
      for (int i = 0; i < m; ++i) {
        sa += a[static_cast<size_t>(i)][x] * a[static_cast<size_t>(i)][x];
        sb += b[static_cast<size_t>(i)][x] * b[static_cast<size_t>(i)][x];
      }
      slice += std::sqrt(sa) * std::sqrt(sb);
    }
    acc += quad.w[node] * slice;
  }
  return 2.0 * acc * phi.spec.cell_volume();
}

double embedding_l1_lhs(const FormField& phi, const FormField& psi, const Quadrature& quad) {
  require_same_shape(phi, psi, "embedding_l1_lhs");
  FormField pf = phi, qf = psi;
  pf.to_rep(Rep::frequency);
  qf.to_rep(Rep::frequency);
  const std::size_t n = phi.spec.npoints();
  const int m = phi.spec.m;
  double acc = 0;
  for (size_t node = 0; node < quad.t.size(); ++node) {
    const auto a = axis_norm_grids(pf, quad.t[node]);
    const auto b = axis_norm_grids(qf, quad.t[node]);
    double slice = 0;
    for (std::size_t x = 0; x < n; ++x) {
      double sa = 0, sb = 0;
      for (int i = 0; i < m; ++i) {
        sa += a[static_cast<size_t>(i)][x];
        sb += b[static_cast<size_t>(i)][x];
      }
      slice += sa * sb;  // sum_{i,j} |d_i phi~| |d_j psi~| factorizes
    }
    acc += quad.w[node] * slice;
  }
  return 2.0 * acc * phi.spec.cell_volume();
}

PairingDecomposition pairing_decomposition(const FormField& phi, const FormField& psi, double p,
                                           const Quadrature& quad) {
  require_same_shape(phi, psi, "pairing_decomposition");
  require_mean_zero(phi, "pairing_decomposition");
  require_mean_zero(psi, "pairing_decomposition");
  if (!(p >= 2)) throw std::domain_error("pairing_decomposition requires p >= 2");

  PairingDecomposition res;
  FormField sp = phi;
  sp.to_rep(Rep::spatial);
  FormField sq = psi;
  sq.to_rep(Rep::spatial);
  res.pairing = std::real(pairing_l2(apply_operator(sp, MultiplierPart::full), sq));
  res.diagonal = std::real(pairing_l2(apply_operator(sp, MultiplierPart::diagonal), sq));
  res.offdiag = std::real(pairing_l2(apply_operator(sp, MultiplierPart::offdiag), sq));

  // count the elementary off-diagonal terms by scanning the built matrix at a
  // generic frequency (each structurally nonzero entry is one 2 R_p R_q term
  // acting twice, once per orientation of the pair)
  {
    const int m = phi.spec.m;
    Eigen::VectorXd xi(m);
    for (int a = 0; a < m; ++a) xi[a] = std::sqrt(2.0 + a);  // no vanishing products
    const Eigen::MatrixXd M = build_multiplier(m, phi.k, xi, MultiplierRoute::entry);
    long long nz = 0;
    for (Eigen::Index r = 0; r < M.rows(); ++r)
      for (Eigen::Index c = 0; c < M.cols(); ++c)
        if (r != c && M(r, c) != 0.0) ++nz;
    res.offdiag_terms = 2 * nz;
  }

  res.abs_pairing = std::abs(res.pairing);
  res.l1_bound = embedding_l1_lhs(phi, psi, quad);
  const double q = p / (p - 1.0);
  res.norm_bound = phi.spec.m * (p - 1.0) * norm_lp(sp, p) * norm_lp(sq, q);
  return res;
}

}  // namespace baf
