#include "qent/entropy.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qent/error.hpp"

namespace qent {

namespace {

// Neumaier-compensated running sum.
class Accumulator {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

std::string fmt_param(const char* name, double v) {
  std::ostringstream os;
  os << name << " = " << v;
  return os.str();
}

void require_normalized(const Spectrum& sigma) {
  if (!sigma.is_normalized()) {
    throw Error(ErrorKind::NotNormalized, fmt_param("spectrum must sum to 1, sum", sigma.sum()));
  }
}

void require_deformation(double r, double s) {
  if (!(r > 0.0) || r == 1.0 || !std::isfinite(r)) {
    throw Error(ErrorKind::DomainError, fmt_param("need r > 0 and r != 1, got r", r));
  }
  if (s == 0.0 || !std::isfinite(s)) {
    throw Error(ErrorKind::DomainError, fmt_param("need finite s != 0, got s", s));
  }
}

double to_base(double nats, LogBase base) {
  return base == LogBase::two ? nats / std::numbers::ln2 : nats;
}

bool is_integer(double s) { return std::isfinite(s) && std::floor(s) == s; }

// log det of a Hermitian positive definite matrix via Cholesky.
double log_det_hpd(const CMatrix& m) {
  Eigen::LLT<CMatrix> llt(m);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::NonPositiveDeterminant, "matrix is not positive definite");
  }
  double total = 0.0;
  const auto& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < l.rows(); ++i) total += std::log(l(i, i).real());
  return 2.0 * total;
}

CMatrix identity_like(const DensityMatrix& q) {
  const auto n = static_cast<Eigen::Index>(q.dim());
  return CMatrix::Identity(n, n);
}

Determinant make_determinant(double log_value) {
  Determinant d;
  d.log_value = log_value;
  if (log_value < std::log(std::numeric_limits<double>::max())) d.value = std::exp(log_value);
  return d;
}

void require_renormalization_order(double r, int alpha) {
  if (!(r > 0.0 && r < 1.0)) {
    throw Error(ErrorKind::DomainError, fmt_param("renormalized determinant needs r in (0,1), got r", r));
  }
  const int needed = alpha_star(r);
  if (alpha < needed) {
    std::ostringstream os;
    os << "alpha = " << alpha << " is below alpha* = " << needed << " for r = " << r;
    throw Error(ErrorKind::DomainError, os.str());
  }
}

}  // namespace

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::direct_spectral: return "direct-spectral";
    case Method::fredholm: return "fredholm";
    case Method::renormalized: return "renormalized";
  }
  return "unknown";
}

double trace_power(const Spectrum& sigma, double r) {
  Accumulator acc;
  for (double l : sigma.values()) {
    if (l > 0.0) acc.add(std::pow(l, r));
  }
  return acc.value();
}

double von_neumann(const Spectrum& sigma, LogBase base) {
  require_normalized(sigma);
  Accumulator acc;
  for (double l : sigma.values()) acc.add(scalar::neg_x_log_x(l));
  return to_base(acc.value(), base);
}

double von_neumann(const DensityMatrix& q, LogBase base) {
  return von_neumann(eig_hermitian(q).spectrum, base);
}

double vn_via_fredholm(const DensityMatrix& q, LogBase base) {
  const CMatrix f = matrix_function(q, scalar::self_power_minus_one);
  return to_base(log_det_hpd(identity_like(q) + f), base);
}

double vn_renormalized(const Spectrum& sigma) {
  Accumulator acc;
  for (double l : sigma.values()) {
    acc.add(scalar::neg_x_log_x(l) - scalar::self_power_minus_one(l));
  }
  return acc.value();
}

double vn_renormalized(const DensityMatrix& q) {
  return vn_renormalized(eig_hermitian(q).spectrum);
}

double vn_renormalized_via_determinant(const DensityMatrix& q) {
  const CMatrix f = matrix_function(q, scalar::self_power_minus_one);
  return log_det_hpd(identity_like(q) + f) - f.trace().real();
}

double unified_from_trace_power(double t, double r, double s) {
  require_deformation(r, s);
  double value;
  if (t > 0.0) {
    // T^s - 1 = expm1(s ln T)
    value = std::expm1(s * std::log(t)) / ((1.0 - r) * s);
  } else if (t == 0.0 || is_integer(s)) {
    value = (std::pow(t, s) - 1.0) / ((1.0 - r) * s);
  } else {
    throw Error(ErrorKind::FractionalPowerOfNegative,
                fmt_param("cannot raise a non-positive base to fractional s; base", t) +
                    fmt_param(", s", s));
  }
  if (!std::isfinite(value)) {
    throw Error(ErrorKind::DomainError, fmt_param("unified entropy diverges for base", t));
  }
  return value;
}

double tsallis(const Spectrum& sigma, double r) {
  require_normalized(sigma);
  require_deformation(r, 1.0);
  return (trace_power(sigma, r) - 1.0) / (1.0 - r);
}

double renyi(const Spectrum& sigma, double r, LogBase base) {
  require_normalized(sigma);
  require_deformation(r, 1.0);
  return to_base(std::log(trace_power(sigma, r)) / (1.0 - r), base);
}

double hu_ye(const Spectrum& sigma, double r, double s) {
  require_normalized(sigma);
  return unified_from_trace_power(trace_power(sigma, r), r, s);
}

double hy_bound(std::size_t d, double r, double s) {
  require_deformation(r, s);
  if (d == 0) throw Error(ErrorKind::DomainError, "dimension must be at least 1");
  const double k = (1.0 - r) * s;
  return std::expm1(k * std::log(static_cast<double>(d))) / k;
}

CMatrix f_r(const DensityMatrix& q, double r) {
  if (!(r > 0.0)) throw Error(ErrorKind::DomainError, fmt_param("need r > 0, got r", r));
  return matrix_function(q, [r](double l) { return l > 0.0 ? std::expm1(std::pow(l, r)) : 0.0; });
}

Determinant det_r(const Spectrum& sigma, double r) {
  if (!(r > 0.0)) throw Error(ErrorKind::DomainError, fmt_param("need r > 0, got r", r));
  Accumulator acc;
  for (double l : sigma.values()) {
    if (!(l > 0.0)) continue;
    const double x = std::pow(l, r);
    const double g = std::expm1(x);
    acc.add(std::isfinite(g) ? std::log1p(g) : x);  // log(1 + g) = x once 1 + g overflows
  }
  return make_determinant(acc.value());
}

Determinant det_r(const DensityMatrix& q, double r) {
  return make_determinant(log_det_hpd(identity_like(q) + f_r(q, r)));
}

int alpha_star(double r) {
  if (!(r > 0.0 && r < 1.0)) {
    throw Error(ErrorKind::DomainError,
                fmt_param("alpha* is defined for r in (0,1) only, got r", r));
  }
  auto alpha = static_cast<int>(std::ceil(1.0 / r));
  while (alpha > 1 && (alpha - 1) * r >= 1.0) --alpha;
  while (alpha * r < 1.0) ++alpha;
  return alpha;
}

double log_det_ren(const Spectrum& sigma, double r, int alpha) {
  require_renormalization_order(r, alpha);
  Accumulator acc;
  for (double l : sigma.values()) {
    if (!(l > 0.0)) continue;
    const double g = std::expm1(std::pow(l, r));
    double term = std::log1p(g);
    double power = 1.0;
    for (int j = 1; j < alpha; ++j) {
      power *= g;
      term += ((j % 2 == 0) ? 1.0 : -1.0) * power / j;
    }
    acc.add(term);
  }
  return acc.value();
}

double log_det_ren(const DensityMatrix& q, double r, int alpha) {
  require_renormalization_order(r, alpha);
  const CMatrix f = f_r(q, r);
  double total = log_det_hpd(identity_like(q) + f);
  CMatrix power = identity_like(q);
  for (int j = 1; j < alpha; ++j) {
    power = power * f;
    total += ((j % 2 == 0) ? 1.0 : -1.0) * power.trace().real() / j;
  }
  return total;
}

double hy_fredholm(const Spectrum& sigma, double r, double s) {
  require_normalized(sigma);
  if (!(r > 1.0)) throw Error(ErrorKind::DomainError, fmt_param("Fredholm HY needs r > 1, got r", r));
  return unified_from_trace_power(det_r(sigma, r).log_value, r, s);
}

double hy_fredholm(const DensityMatrix& q, double r, double s) {
  if (!(r > 1.0)) throw Error(ErrorKind::DomainError, fmt_param("Fredholm HY needs r > 1, got r", r));
  return unified_from_trace_power(det_r(q, r).log_value, r, s);
}

double hy_renormalized(const Spectrum& sigma, double r, double s, std::optional<int> alpha) {
  require_deformation(r, s);
  const int order = alpha.value_or(alpha_star(r));
  return unified_from_trace_power(log_det_ren(sigma, r, order), r, s);
}

ProbeResult i_r_divergence_probe(const SpectrumGenerator& lambda, double r, double threshold,
                                 std::size_t k_max) {
  ProbeResult out;
  Accumulator acc;
  for (std::size_t k = 1; k <= k_max; ++k) {
    const double l = lambda(k);
    if (l > 0.0) acc.add(std::pow(l, r));
    out.index = k;
    out.partial_sum = acc.value();
    if (out.partial_sum > threshold) {
      out.reached = true;
      return out;
    }
  }
  return out;
}

std::optional<EntropyKind> parse_entropy_kind(std::string_view name) noexcept {
  if (name == "vn") return EntropyKind::vn;
  if (name == "vn-ren") return EntropyKind::vn_ren;
  if (name == "tsallis") return EntropyKind::tsallis;
  if (name == "renyi") return EntropyKind::renyi;
  if (name == "hy") return EntropyKind::hy;
  if (name == "hy-fredholm") return EntropyKind::hy_fredholm;
  if (name == "hy-ren") return EntropyKind::hy_ren;
  return std::nullopt;
}

std::string_view to_string(EntropyKind kind) noexcept {
  switch (kind) {
    case EntropyKind::vn: return "vn";
    case EntropyKind::vn_ren: return "vn-ren";
    case EntropyKind::tsallis: return "tsallis";
    case EntropyKind::renyi: return "renyi";
    case EntropyKind::hy: return "hy";
    case EntropyKind::hy_fredholm: return "hy-fredholm";
    case EntropyKind::hy_ren: return "hy-ren";
  }
  return "unknown";
}

EntropyResult evaluate(EntropyKind kind, const DensityMatrix& q, const EntropyParams& p) {
  const bool log_valued = kind == EntropyKind::vn || kind == EntropyKind::renyi;
  if (p.log_base == LogBase::two && !log_valued) {
    throw Error(ErrorKind::DomainError,
                "base 2 applies only to vn and renyi; " + std::string(to_string(kind)) +
                    " is not a logarithm");
  }
  const Spectrum sigma = eig_hermitian(q).spectrum;
  EntropyResult out;
  switch (kind) {
    case EntropyKind::vn:
      out.value = von_neumann(sigma, p.log_base);
      out.diagnostics.log_determinant = vn_via_fredholm(q);
      break;
    case EntropyKind::vn_ren:
      out.method = Method::renormalized;
      out.value = vn_renormalized(sigma);
      out.diagnostics.log_determinant = vn_renormalized_via_determinant(q);
      break;
    case EntropyKind::tsallis:
      out.value = tsallis(sigma, p.r);
      out.diagnostics.trace_power = trace_power(sigma, p.r);
      break;
    case EntropyKind::renyi: {
      const double t = trace_power(sigma, p.r);
      out.diagnostics.trace_power = t;
      if (!std::isfinite(t)) {
        out.divergent = true;
        out.value = std::numeric_limits<double>::infinity();
      } else {
        out.value = renyi(sigma, p.r, p.log_base);
      }
      break;
    }
    case EntropyKind::hy:
      out.value = hu_ye(sigma, p.r, p.s);
      out.diagnostics.trace_power = trace_power(sigma, p.r);
      break;
    case EntropyKind::hy_fredholm: {
      out.method = Method::fredholm;
      const Determinant d = det_r(q, p.r);
      out.diagnostics.log_determinant = d.log_value;
      out.diagnostics.trace_power = trace_power(sigma, p.r);
      out.value = hy_fredholm(q, p.r, p.s);
      break;
    }
    case EntropyKind::hy_ren: {
      out.method = Method::renormalized;
      require_deformation(p.r, p.s);
      const int alpha = p.alpha.value_or(alpha_star(p.r));
      out.diagnostics.alpha = alpha;
      out.diagnostics.log_determinant = log_det_ren(sigma, p.r, alpha);
      out.diagnostics.trace_power = trace_power(sigma, p.r);
      out.value = hy_renormalized(sigma, p.r, p.s, alpha);
      break;
    }
  }
  return out;
}

}  // namespace qent
