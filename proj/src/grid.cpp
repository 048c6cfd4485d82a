#include "baforms/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace baf {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// FFTW plan creation is not thread-safe; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex mu;
  return mu;
}

struct PlanKey {
  std::vector<int> sizes;
  int sign;
  bool operator<(const PlanKey& o) const {
    if (sign != o.sign) return sign < o.sign;
    return sizes < o.sizes;
  }
};

// New-array execute interface: one cached plan per (shape, direction),
// created with FFTW_ESTIMATE (deterministic, no measurement noise).
fftw_plan get_plan(const std::vector<int>& sizes, int sign, fftw_complex* io) {
  static std::map<PlanKey, fftw_plan>* cache = new std::map<PlanKey, fftw_plan>();
  std::lock_guard<std::mutex> lock(planner_mutex());
  const PlanKey key{sizes, sign};
  auto it = cache->find(key);
  if (it != cache->end()) return it->second;
  // Plan on a scratch buffer so the caller's data is not clobbered by
  // planning; FFTW_ESTIMATE does not touch the arrays, but keep it tidy.
  fftw_plan p = fftw_plan_dft(static_cast<int>(sizes.size()), sizes.data(), io, io, sign,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
  (*cache)[key] = p;
  return p;
}

}  // namespace

void GridSpec::validate() const {
  if (m < 1 || m > 12) throw std::domain_error("grid dimension must be in 1..12");
  if (static_cast<int>(sizes.size()) != m || static_cast<int>(box.size()) != m)
    throw std::domain_error("grid spec arrays must have length m");
  for (int a = 0; a < m; ++a) {
    const int n = sizes[static_cast<size_t>(a)];
    if (n < 4 || (n & (n - 1)) != 0)
      throw std::domain_error("grid size on axis " + std::to_string(a + 1) +
                              " must be a power of two >= 4, got " + std::to_string(n));
    if (!(box[static_cast<size_t>(a)] > 0))
      throw std::domain_error("box length on axis " + std::to_string(a + 1) + " must be positive");
  }
}

std::size_t GridSpec::npoints() const {
  std::size_t n = 1;
  for (int s : sizes) n *= static_cast<std::size_t>(s);
  return n;
}

double GridSpec::volume() const {
  double v = 1;
  for (double l : box) v *= l;
  return v;
}

double GridSpec::cell_volume() const { return volume() / static_cast<double>(npoints()); }

ScalarField ScalarField::zero(const GridSpec& s, Rep r) {
  s.validate();
  ScalarField f;
  f.spec = s;
  f.rep = r;
  f.v.assign(s.npoints(), {0.0, 0.0});
  return f;
}

void frequency_integers(const GridSpec& spec, std::size_t linear, int* out) {
  for (int a = spec.m - 1; a >= 0; --a) {
    const int n = spec.sizes[static_cast<size_t>(a)];
    const int j = static_cast<int>(linear % static_cast<std::size_t>(n));
    linear /= static_cast<std::size_t>(n);
    out[a] = (j <= n / 2) ? j : j - n;
  }
}

void frequency_vector(const GridSpec& spec, std::size_t linear, double* xi_out) {
  int ji[12];
  frequency_integers(spec, linear, ji);
  for (int a = 0; a < spec.m; ++a)
    xi_out[a] = kTwoPi * static_cast<double>(ji[a]) / spec.box[static_cast<size_t>(a)];
}

double max_freq_sq(const GridSpec& spec) {
  double s = 0;
  for (int a = 0; a < spec.m; ++a) {
    const double x = kTwoPi * (spec.sizes[static_cast<size_t>(a)] / 2) / spec.box[static_cast<size_t>(a)];
    s += x * x;
  }
  return s;
}

double min_freq_sq(const GridSpec& spec) {
  double best = 0;
  for (int a = 0; a < spec.m; ++a) {
    const double x = kTwoPi / spec.box[static_cast<size_t>(a)];
    if (best == 0 || x * x < best) best = x * x;
  }
  return best;
}

void transform_inplace(ScalarField& f, Rep target) {
  if (f.rep == target) return;
  f.spec.validate();
  auto* data = reinterpret_cast<fftw_complex*>(f.v.data());
  const int sign = (target == Rep::frequency) ? FFTW_FORWARD : FFTW_BACKWARD;
  fftw_plan p = get_plan(f.spec.sizes, sign, data);
  fftw_execute_dft(p, data, data);
  if (target == Rep::frequency) {
    const double inv = 1.0 / static_cast<double>(f.spec.npoints());
    for (auto& z : f.v) z *= inv;
  }
  f.rep = target;
}

ScalarField transform(const ScalarField& f, Rep target) {
  ScalarField g = f;
  transform_inplace(g, target);
  return g;
}

ScalarField apply_scalar_multiplier(const ScalarField& f,
                                    const std::function<std::complex<double>(const double*)>& mult,
                                    std::complex<double> zero_mode) {
  ScalarField g = transform(f, Rep::frequency);
  double xi[12];
  const std::size_t n = g.spec.npoints();
  for (std::size_t i = 0; i < n; ++i) {
    frequency_vector(g.spec, i, xi);
    bool zero = true;
    for (int a = 0; a < g.spec.m; ++a)
      if (xi[a] != 0.0) { zero = false; break; }
    if (zero) {
      g.v[i] *= zero_mode;
    } else {
      const std::complex<double> mv = mult(xi);
      if (!std::isfinite(mv.real()) || !std::isfinite(mv.imag())) {
        std::ostringstream os;
        os << "non-finite multiplier value at xi = (";
        for (int a = 0; a < g.spec.m; ++a) os << (a ? ", " : "") << xi[a];
        os << ")";
        throw std::runtime_error(os.str());
      }
      g.v[i] *= mv;
    }
  }
  if (f.rep == Rep::spatial) transform_inplace(g, Rep::spatial);
  return g;
}

namespace {

void check_axis(const GridSpec& spec, int axis) {
  if (axis < 1 || axis > spec.m)
    throw std::domain_error("axis " + std::to_string(axis) + " out of range 1.." +
                            std::to_string(spec.m));
}

}  // namespace

ScalarField riesz(const ScalarField& f, int axis) {
  check_axis(f.spec, axis);
  const int a = axis - 1;
  const int m = f.spec.m;
  return apply_scalar_multiplier(
      f,
      [a, m](const double* xi) {
        double s = 0;
        for (int i = 0; i < m; ++i) s += xi[i] * xi[i];
        return std::complex<double>(0.0, xi[a] / std::sqrt(s));
      },
      0.0);
}

ScalarField heat_extend(const ScalarField& f, double t) {
  if (t < 0) throw std::domain_error("heat extension requires t >= 0");
  const int m = f.spec.m;
  return apply_scalar_multiplier(
      f,
      [t, m](const double* xi) {
        double s = 0;
        for (int a = 0; a < m; ++a) s += xi[a] * xi[a];
        return std::complex<double>(std::exp(-t * s), 0.0);
      },
      1.0);
}

ScalarField partial_derivative(const ScalarField& f, int axis) {
  check_axis(f.spec, axis);
  const int a = axis - 1;
  return apply_scalar_multiplier(
      f, [a](const double* xi) { return std::complex<double>(0.0, xi[a]); }, 0.0);
}

std::complex<double> mean_value(const ScalarField& f) {
  if (f.rep == Rep::frequency) return f.v[0];
  std::complex<double> s = 0;
  for (const auto& z : f.v) s += z;
  return s / static_cast<double>(f.spec.npoints());
}

void remove_mean(ScalarField& f) {
  if (f.rep == Rep::frequency) {
    f.v[0] = 0;
    return;
  }
  const std::complex<double> mu = mean_value(f);
  for (auto& z : f.v) z -= mu;
}

void band_limit(ScalarField& f) {
  const Rep orig = f.rep;
  transform_inplace(f, Rep::frequency);
  int ji[12];
  const std::size_t n = f.spec.npoints();
  for (std::size_t i = 0; i < n; ++i) {
    frequency_integers(f.spec, i, ji);
    for (int a = 0; a < f.spec.m; ++a) {
      if (std::abs(ji[a]) > f.spec.sizes[static_cast<size_t>(a)] / 3) {
        f.v[i] = 0;
        break;
      }
    }
  }
  transform_inplace(f, orig);
}

double active_freq_sq(const ScalarField& f) {
  ScalarField g = transform(f, Rep::frequency);
  double peak = 0;
  for (const auto& z : g.v) peak = std::max(peak, std::abs(z));
  if (peak == 0) return 0;
  // ignore transform round-off dust well below the spectral peak
  const double cut = 1e-12 * peak;
  double xi[12];
  double best = 0;
  const std::size_t n = g.spec.npoints();
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(g.v[i]) <= cut) continue;
    frequency_vector(g.spec, i, xi);
    double s = 0;
    for (int a = 0; a < g.spec.m; ++a) s += xi[a] * xi[a];
    if (s > best) best = s;
  }
  return best;
}

ScalarField random_real_field(const GridSpec& spec, Rng& rng) {
  ScalarField f = ScalarField::zero(spec, Rep::spatial);
  for (auto& z : f.v) z = std::complex<double>(rng.gaussian(), 0.0);
  transform_inplace(f, Rep::frequency);
  f.v[0] = 0;  // mean-zero
  band_limit(f);
  transform_inplace(f, Rep::spatial);
  // round away the O(1e-16) imaginary dust so the field is exactly real
  for (auto& z : f.v) z = std::complex<double>(z.real(), 0.0);
  return f;
}

std::complex<double> integral(const ScalarField& f) {
  if (f.rep != Rep::spatial)
    throw std::logic_error("integral expects a spatial-representation field");
  std::complex<double> s = 0;
  for (const auto& z : f.v) s += z;
  return s * f.spec.cell_volume();
}

double norm_l2(const ScalarField& f) {
  double s = 0;
  if (f.rep == Rep::spatial) {
    for (const auto& z : f.v) s += std::norm(z);
    return std::sqrt(s * f.spec.cell_volume());
  }
  for (const auto& z : f.v) s += std::norm(z);
  return std::sqrt(s * f.spec.volume());
}

}  // namespace baf
