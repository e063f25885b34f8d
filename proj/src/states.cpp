#include "qent/states.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "qent/error.hpp"
#include "qent/rng.hpp"

namespace qent {

namespace {

constexpr double kSchurSlack = 1e-15;

[[noreturn]] void violation(const std::string& what) {
  throw Error(ErrorKind::ConstraintViolation, what);
}

double x_log_x(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

std::vector<double> normalize(std::vector<double> v) {
  const double total = std::accumulate(v.begin(), v.end(), 0.0);
  for (double& x : v) x /= total;
  return v;
}

}  // namespace

std::size_t x_state_pair_count(std::size_t d) noexcept { return d * d / 4; }

void check_x_state_params(const XStateParams& p) {
  if (p.d < 1) violation("subsystem dimension must be at least 1");
  const std::size_t n = p.d * p.d;
  const std::size_t l = x_state_pair_count(p.d);
  if (p.a.size() != n) {
    violation("diagonal needs " + std::to_string(n) + " entries, got " + std::to_string(p.a.size()));
  }
  if (p.outer.size() != l || p.inner.size() != l) {
    violation("need " + std::to_string(l) + " outer and inner couplings");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(p.a[i] >= 0.0)) violation("a_" + std::to_string(i + 1) + " is negative");
    total += p.a[i];
  }
  if (std::abs(total - 1.0) > tol::kValidation) {
    std::ostringstream os;
    os << "sum of a_i is " << total << ", not 1";
    violation(os.str());
  }
  for (std::size_t i = 0; i < l; ++i) {
    const double bound = p.a[i] * p.a[n - 1 - i];
    if (std::norm(p.outer[i]) > bound + kSchurSlack) {
      std::ostringstream os;
      os << "|w_" << i + 1 << "|^2 = " << std::norm(p.outer[i]) << " exceeds a_" << i + 1 << " a_"
         << n - i << " = " << bound;
      violation(os.str());
    }
  }
  for (std::size_t i = 0; i < l; ++i) {
    const std::size_t row = l + i;
    const std::size_t col = n - l - 1 - i;
    const double bound = p.a[row] * p.a[col];
    if (std::norm(p.inner[i]) > bound + kSchurSlack) {
      std::ostringstream os;
      os << "|z_" << i + 1 << "|^2 = " << std::norm(p.inner[i]) << " exceeds a_" << row + 1
         << " a_" << col + 1 << " = " << bound;
      violation(os.str());
    }
  }
}

DensityMatrix x_state(const XStateParams& p) {
  check_x_state_params(p);
  const std::size_t n = p.d * p.d;
  const std::size_t l = x_state_pair_count(p.d);
  const auto ni = static_cast<Eigen::Index>(n);
  CMatrix m = CMatrix::Zero(ni, ni);
  for (std::size_t i = 0; i < n; ++i) {
    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = p.a[i];
  }
  auto couple = [&m](std::size_t row, std::size_t col, Complex v) {
    m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = v;
    m(static_cast<Eigen::Index>(col), static_cast<Eigen::Index>(row)) = std::conj(v);
  };
  for (std::size_t i = 0; i < l; ++i) couple(i, n - 1 - i, p.outer[i]);
  for (std::size_t i = 0; i < l; ++i) couple(l + i, n - l - 1 - i, p.inner[i]);
  return validate_density(m);
}

XStateParams x_state_random_params(std::size_t d, std::uint64_t seed) {
  if (d < 2 || d > 8) {
    throw Error(ErrorKind::DomainError, "random X-states need 2 <= d <= 8, got " + std::to_string(d));
  }
  SampleRng rng(seed);
  XStateParams p;
  p.d = d;
  const std::size_t n = d * d;
  const std::size_t l = x_state_pair_count(d);
  p.a.resize(n);
  for (double& x : p.a) x = -std::log1p(-rng.uniform());
  p.a = normalize(std::move(p.a));

  auto draw = [&rng](double bound) {
    const double magnitude = rng.uniform() * bound;
    const double phase = 2.0 * std::numbers::pi * rng.uniform();
    return std::polar(magnitude, phase);
  };
  p.outer.resize(l);
  p.inner.resize(l);
  for (std::size_t i = 0; i < l; ++i) p.outer[i] = draw(std::sqrt(p.a[i] * p.a[n - 1 - i]));
  for (std::size_t i = 0; i < l; ++i) {
    p.inner[i] = draw(std::sqrt(p.a[l + i] * p.a[n - l - 1 - i]));
  }
  return p;
}

DensityMatrix x_state_random(std::size_t d, std::uint64_t seed) {
  return x_state(x_state_random_params(d, seed));
}

DensityMatrix x_state_sample(std::size_t d, std::uint64_t master_seed, std::uint64_t index) {
  return x_state_random(d, derive_seed(master_seed, index));
}

Spectrum power_law_spectrum(double eps, std::size_t k) {
  if (!(eps > 0.0)) throw Error(ErrorKind::DomainError, "power-law spectrum needs eps > 0");
  if (k < 1) throw Error(ErrorKind::DomainError, "power-law spectrum needs K >= 1");
  std::vector<double> v(k);
  for (std::size_t i = 0; i < k; ++i) v[i] = std::pow(static_cast<double>(i + 1), -(1.0 + eps));
  return Spectrum::normalized(normalize(std::move(v)));
}

SpectrumGenerator power_law_generator(double eps) {
  if (!(eps > 0.0)) throw Error(ErrorKind::DomainError, "power-law spectrum needs eps > 0");
  const double z = zeta_series(1.0 + eps);
  return [eps, z](std::size_t k) { return std::pow(static_cast<double>(k), -(1.0 + eps)) / z; };
}

SplicedSpectrum splice_spectrum(const Spectrum& sigma, double eps, double delta, double threshold,
                                std::size_t max_length) {
  if (!sigma.is_normalized()) throw Error(ErrorKind::NotNormalized, "splice needs a normalized spectrum");
  if (!(eps > 0.0) || !(delta > 0.0) || !(threshold >= 0.0)) {
    throw Error(ErrorKind::DomainError, "splice needs eps > 0, delta > 0, M >= 0");
  }
  const double tail_mass = std::min(0.45 * delta, 0.9);
  const double s0 = 1.0 / (1.0 + eps);
  const std::size_t head = sigma.size();

  SplicedSpectrum out;
  out.head_length = head;
  out.probe_exponent = s0;
  for (std::size_t tail = 1; head + tail <= max_length; tail *= 2) {
    std::vector<double> v(head + tail);
    for (std::size_t k = 0; k < head; ++k) v[k] = (1.0 - tail_mass) * sigma[k];
    double tail_norm = 0.0;
    for (std::size_t k = head; k < head + tail; ++k) {
      tail_norm += std::pow(static_cast<double>(k + 1), -(1.0 + eps));
    }
    for (std::size_t k = head; k < head + tail; ++k) {
      v[k] = tail_mass * std::pow(static_cast<double>(k + 1), -(1.0 + eps)) / tail_norm;
    }
    // L1 distance with both spectra in the same eigenbasis, before re-sorting.
    double l1 = 0.0;
    for (std::size_t k = 0; k < head + tail; ++k) l1 += std::abs(v[k] - (k < head ? sigma[k] : 0.0));
    Spectrum spliced = Spectrum::from_values(std::move(v));
    const double power = trace_power(spliced, s0);
    if (power > threshold) {
      if (!(l1 < delta)) break;
      out.spectrum = std::move(spliced);
      out.tail_length = tail;
      out.l1_distance = l1;
      out.power_sum = power;
      return out;
    }
  }
  std::ostringstream os;
  os << "no tail within length " << max_length << " lifts the s = " << s0 << " power sum above "
     << threshold << " at L1 distance < " << delta;
  throw Error(ErrorKind::TruncationInsufficient, os.str());
}

Spectrum log_power_spectrum(double beta, std::size_t k) {
  if (!(beta > 1.0)) throw Error(ErrorKind::DomainError, "log-power spectrum needs beta > 1");
  if (k < 1) throw Error(ErrorKind::DomainError, "log-power spectrum needs K >= 1");
  std::vector<double> v(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double n = static_cast<double>(i + 2);
    v[i] = 1.0 / (n * std::pow(std::log(n), beta));
  }
  return Spectrum::normalized(normalize(std::move(v)));
}

Spectrum zeta_spectrum(double q, double r, std::size_t k, bool normalized) {
  if (!(q > 1.0) || !(r > 1.0)) {
    throw Error(ErrorKind::DomainError, "zeta spectrum needs q > 1 and r > 1");
  }
  if (k < 1) throw Error(ErrorKind::DomainError, "zeta spectrum needs k >= 1");
  const auto primes = first_k_primes(k);
  std::vector<double> v(k);
  for (std::size_t i = 0; i < k; ++i) {
    v[i] = std::pow(std::log1p(std::pow(static_cast<double>(primes[i]), -q)), 1.0 / r);
  }
  if (normalized) return Spectrum::normalized(normalize(std::move(v)));
  return Spectrum::from_values(std::move(v));
}

namespace {

// ln(tanh^2 r) for r > 0.
double log_tanh_squared(double r) {
  const double e = std::exp(-2.0 * r);
  // tanh r = (1 - e) / (1 + e)
  return 2.0 * (std::log1p(-e) - std::log1p(e));
}

// 1 / cosh^2 r
double sech_squared(double r) {
  const double e = std::exp(-2.0 * r);
  return 4.0 * e / ((1.0 + e) * (1.0 + e));
}

}  // namespace

SchmidtSpectrum squeezed_schmidt_spectrum(const SqueezedParams& params) {
  if (!(params.r >= 0.0)) throw Error(ErrorKind::DomainError, "squeezing needs r >= 0");
  if (params.n_max < 1) throw Error(ErrorKind::DomainError, "Schmidt truncation needs N_max >= 1");
  SchmidtSpectrum out;
  if (params.r == 0.0) {
    out.spectrum = Spectrum::normalized({1.0});
    return out;
  }
  const double log_t = log_tanh_squared(params.r);
  const double head = sech_squared(params.r);
  std::vector<double> p(params.n_max + 1);
  for (std::size_t n = 0; n <= params.n_max; ++n) {
    p[n] = head * std::exp(static_cast<double>(n) * log_t);
  }
  out.tail_mass = std::exp(static_cast<double>(params.n_max + 1) * log_t);
  out.spectrum = Spectrum::normalized(normalize(std::move(p)));
  return out;
}

std::size_t squeezed_truncation_for_tail(double r, double tail) {
  if (!(tail > 0.0 && tail < 1.0)) throw Error(ErrorKind::DomainError, "tail must be in (0,1)");
  if (!(r > 0.0)) return 1;
  const double log_t = log_tanh_squared(r);
  const double needed = std::log(tail) / log_t;  // n_max + 1 > needed
  if (needed > 1e8) {
    throw Error(ErrorKind::DomainError, "Schmidt truncation would exceed 1e8 terms");
  }
  auto n_max = static_cast<std::size_t>(std::floor(needed));
  while (std::exp(static_cast<double>(n_max + 1) * log_t) >= tail) ++n_max;
  while (n_max > 1 && std::exp(static_cast<double>(n_max) * log_t) < tail) --n_max;
  return std::max<std::size_t>(n_max, 1);
}

GaussianEntropy gaussian_entropy_analytic(double r, EvalMode mode) {
  if (!(r >= 0.0)) throw Error(ErrorKind::DomainError, "Gaussian entropy needs r >= 0");
  GaussianEntropy out;
  if (mode == EvalMode::naive) {
    const double ch = std::cosh(r);
    const double sh = std::sinh(r);
    const double c = ch * ch;
    const double s = sh * sh;
    out.value = x_log_x(c) - x_log_x(s);
    out.overflow = !std::isfinite(out.value);
    out.rounding_bound =
        std::numeric_limits<double>::epsilon() * (std::abs(x_log_x(c)) + std::abs(x_log_x(s)));
    return out;
  }
  if (r == 0.0) return out;
  const double ln_c = r < 20.0 ? 2.0 * std::log(std::cosh(r))
                               : 2.0 * (r + std::log1p(std::exp(-2.0 * r)) - std::numbers::ln2);
  // u = 1 / sinh^2 r; (c - 1) ln(c / (c - 1)) = ln(1 + u) / u
  const double em1 = std::expm1(-2.0 * r);
  const double u = 4.0 * std::exp(-2.0 * r) / (em1 * em1);
  out.value = ln_c + (u == 0.0 ? 1.0 : std::log1p(u) / u);
  return out;
}

KernelSpec squeezed_kernel() {
  return KernelSpec{[](double x, double y) { return std::tanh(x + y) / std::cosh(x - y); },
                    "squeezed", true};
}

DensityMatrix diag_state(const Spectrum& sigma) {
  if (!sigma.is_normalized()) {
    throw Error(ErrorKind::NotNormalized, "diagonal state needs a normalized spectrum");
  }
  const auto n = static_cast<Eigen::Index>(sigma.size());
  CMatrix m = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = sigma[static_cast<std::size_t>(i)];
  return validate_density(m);
}

}  // namespace qent
