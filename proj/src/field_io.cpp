#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "baforms/fields.hpp"

namespace baf {

FormField FormField::zero(const GridSpec& spec, int k, Rep rep) {
  spec.validate();
  if (k < 0 || k > spec.m)
    throw std::domain_error("form degree k=" + std::to_string(k) + " out of range for m=" +
                            std::to_string(spec.m));
  FormField f;
  f.spec = spec;
  f.k = k;
  f.ch.assign(static_cast<size_t>(binomial(spec.m, k)), ScalarField::zero(spec, rep));
  return f;
}

Rep FormField::rep() const {
  for (const auto& c : ch)
    if (c.rep != ch.front().rep) throw std::logic_error("mixed channel representations");
  return ch.front().rep;
}

void FormField::to_rep(Rep target) {
  for (auto& c : ch) transform_inplace(c, target);
}

FormField random_form_field(const GridSpec& spec, int k, Rng& rng) {
  FormField f = FormField::zero(spec, k);
  for (auto& c : f.ch) c = random_real_field(spec, rng);
  return f;
}

void remove_mean(FormField& f) {
  for (auto& c : f.ch) baf::remove_mean(c);
}

double active_freq_sq(const FormField& f) {
  double best = 0;
  for (const auto& c : f.ch) best = std::max(best, baf::active_freq_sq(c));
  return best;
}

double norm_lp(const FormField& f, double p) {
  if (!(p >= 1)) throw std::domain_error("p-norm requires p >= 1");
  if (f.rep() != Rep::spatial) throw std::logic_error("p-norm expects spatial representation");
  const std::size_t n = f.spec.npoints();
  double acc = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double sq = 0;
    for (const auto& c : f.ch) sq += std::norm(c.v[i]);
    acc += std::pow(sq, p / 2.0);
  }
  return std::pow(acc * f.spec.cell_volume(), 1.0 / p);
}

std::complex<double> pairing_l2(const FormField& f, const FormField& g) {
  if (!(f.spec == g.spec) || f.k != g.k)
    throw std::domain_error("pairing requires matching spec and degree");
  if (f.rep() != Rep::spatial || g.rep() != Rep::spatial)
    throw std::logic_error("pairing expects spatial representation");
  std::complex<double> acc = 0;
  const std::size_t n = f.spec.npoints();
  for (std::size_t i = 0; i < n; ++i)
    for (int c = 0; c < f.dim(); ++c)
      acc += f.ch[static_cast<size_t>(c)].v[i] * std::conj(g.ch[static_cast<size_t>(c)].v[i]);
  return acc * f.spec.cell_volume();
}

FormField hodge_star(const FormField& f) {
  FormField out = FormField::zero(f.spec, f.spec.m - f.k, f.rep());
  const auto basis = enumerate_multi_indices(f.spec.m, f.k);
  for (size_t p = 0; p < basis.size(); ++p) {
    const double s = permutation_sign(basis[p]);
    const int target = lex_position(basis[p].complement());
    auto& dst = out.ch[static_cast<size_t>(target)];
    const auto& src = f.ch[p];
    for (std::size_t i = 0; i < src.v.size(); ++i) dst.v[i] += s * src.v[i];
  }
  return out;
}

void write_field(std::ostream& os, const FormField& f) {
  if (f.rep() != Rep::spatial) throw std::logic_error("field files hold spatial samples");
  os.precision(17);
  os << f.spec.m << ' ' << f.k;
  for (int n : f.spec.sizes) os << ' ' << n;
  for (double L : f.spec.box) os << ' ' << L;
  os << '\n';
  const std::size_t n = f.spec.npoints();
  for (std::size_t i = 0; i < n; ++i) {
    for (int c = 0; c < f.dim(); ++c) {
      const auto z = f.ch[static_cast<size_t>(c)].v[i];
      os << (c ? " " : "") << z.real() << ' ' << z.imag();
    }
    os << '\n';
  }
}

void write_field_file(const std::string& path, const FormField& f) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_field(os, f);
}

FormField read_field(std::istream& is) {
  std::string line;
  int lineno = 0;
  if (!std::getline(is, line)) throw ParseError(1, "empty field file");
  ++lineno;
  std::istringstream hs(line);
  GridSpec spec;
  int k = -1;
  if (!(hs >> spec.m >> k)) throw ParseError(lineno, "header must start with 'm k'");
  if (spec.m < 1 || spec.m > 12) throw ParseError(lineno, "ambient dimension out of range 1..12");
  spec.sizes.resize(static_cast<size_t>(spec.m));
  spec.box.resize(static_cast<size_t>(spec.m));
  for (int a = 0; a < spec.m; ++a)
    if (!(hs >> spec.sizes[static_cast<size_t>(a)]))
      throw ParseError(lineno, "header missing grid size for axis " + std::to_string(a + 1));
  for (int a = 0; a < spec.m; ++a)
    if (!(hs >> spec.box[static_cast<size_t>(a)]))
      throw ParseError(lineno, "header missing box length for axis " + std::to_string(a + 1));
  std::string extra;
  if (hs >> extra) throw ParseError(lineno, "trailing tokens in header");
  try {
    spec.validate();
  } catch (const std::exception& e) {
    throw ParseError(lineno, e.what());
  }
  if (k < 0 || k > spec.m) throw ParseError(lineno, "form degree k out of range 0..m");

  FormField f = FormField::zero(spec, k);
  const std::size_t npts = spec.npoints();
  for (std::size_t i = 0; i < npts; ++i) {
    if (!std::getline(is, line))
      throw ParseError(lineno + 1, "unexpected end of file: expected " + std::to_string(npts) +
                                       " coefficient rows");
    ++lineno;
    std::istringstream rs(line);
    for (int c = 0; c < f.dim(); ++c) {
      double re, im;
      if (!(rs >> re >> im))
        throw ParseError(lineno, "row holds fewer than " + std::to_string(2 * f.dim()) +
                                     " numbers");
      f.ch[static_cast<size_t>(c)].v[i] = {re, im};
    }
    if (rs >> extra) throw ParseError(lineno, "row holds more than " +
                                                  std::to_string(2 * f.dim()) + " numbers");
  }
  while (std::getline(is, line)) {
    ++lineno;
    std::istringstream rs(line);
    if (rs >> extra) throw ParseError(lineno, "trailing data after the last grid point");
  }
  return f;
}

FormField read_field_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_field(is);
}

}  // namespace baf
