#pragma once

// Entropy functionals over spectra and density matrices, together with their
// determinant reformulations:
//
//   D(Q)          = det(1 + (Q^{-Q} - 1))           log D(Q)   = -Tr Q log Q
//   D_r(Q)        = det(1 + (e^{Q^r} - 1))          log D_r(Q) = Tr Q^r
//   D^ren_{r,a}   = D_r(Q) exp(sum_{j<a} (-1)^j Tr F^j / j),  F = e^{Q^r} - 1
//
// and the Hu-Ye family HY_r^s = ((Tr Q^r)^s - 1) / ((1 - r) s), which contains
// Tsallis (s = 1), Renyi (s -> 0) and von Neumann (r -> 1, s = 1) as members.
//
// Every functional has a Spectrum overload; DensityMatrix inputs are reduced
// through eig_hermitian unless the matrix route is the point of the function.

#include <cstddef>
#include <functional>
#include <optional>
#include <string_view>

#include "qent/spectral.hpp"

namespace qent {

enum class LogBase { natural, two };

struct EntropyParams {
  double r = 2.0;
  double s = 1.0;
  std::optional<int> alpha;  // nullopt resolves to alpha_star(r)
  LogBase log_base = LogBase::natural;
};

enum class Method { direct_spectral, fredholm, renormalized };

std::string_view to_string(Method method) noexcept;

struct EntropyDiagnostics {
  std::optional<double> trace_power;
  std::optional<double> log_determinant;
  std::optional<int> alpha;
};

struct EntropyResult {
  double value = 0.0;  // +infinity sentinel only when divergent
  Method method = Method::direct_spectral;
  EntropyDiagnostics diagnostics;
  bool divergent = false;
};

/// A determinant kept in log form. `value` is empty when exp(log_value)
/// does not fit in a double.
struct Determinant {
  double log_value = 0.0;
  std::optional<double> value;
  bool overflow() const noexcept { return !value.has_value(); }
};

/// I_r = sum lambda^r.
double trace_power(const Spectrum& sigma, double r);

double von_neumann(const Spectrum& sigma, LogBase base = LogBase::natural);
double von_neumann(const DensityMatrix& q, LogBase base = LogBase::natural);

/// log det(1 + Q^{-Q} - 1), evaluated on the matrix (Cholesky log-determinant).
double vn_via_fredholm(const DensityMatrix& q, LogBase base = LogBase::natural);

/// log det_2(1 + F) with F = Q^{-Q} - 1, i.e.
/// sum(-lambda log lambda - (lambda^{-lambda} - 1)). Each term is <= 0 and of
/// order (lambda log lambda)^2, so the sum stays finite on spectra whose plain
/// entropy diverges. Accepts truncated, unnormalized spectra.
double vn_renormalized(const Spectrum& sigma);
double vn_renormalized(const DensityMatrix& q);

/// Same quantity on the matrix: log det(1 + F) - Tr F.
double vn_renormalized_via_determinant(const DensityMatrix& q);

double tsallis(const Spectrum& sigma, double r);
double renyi(const Spectrum& sigma, double r, LogBase base = LogBase::natural);
double hu_ye(const Spectrum& sigma, double r, double s);

/// ((d^{(1-r)s}) - 1) / ((1-r)s), the value of HY on the maximally mixed state of rank d.
double hy_bound(std::size_t d, double r, double s);

/// The unified-entropy map applied to a given trace power T: (T^s - 1)/((1-r)s).
/// T must be positive unless s is a nonzero integer.
double unified_from_trace_power(double trace_power, double r, double s);

/// e^{Q^r} - 1.
CMatrix f_r(const DensityMatrix& q, double r);

/// D_r = prod(1 + (e^{lambda^r} - 1)), accumulated as sum log1p(expm1(lambda^r)).
Determinant det_r(const Spectrum& sigma, double r);
/// D_r as det(1 + f_r(Q)) of the matrix itself.
Determinant det_r(const DensityMatrix& q, double r);

/// Smallest integer alpha with alpha * r >= 1, for r in (0,1).
int alpha_star(double r);

/// log det_alpha(1 + F), F = e^{Q^r} - 1, with the Carleman factor
/// exp(sum_{j=1}^{alpha-1} (-1)^j Tr F^j / j).
double log_det_ren(const Spectrum& sigma, double r, int alpha);
/// Matrix route: log det(1 + F) plus traces of explicit matrix powers F^j.
double log_det_ren(const DensityMatrix& q, double r, int alpha);

/// HY through log D_r, r > 1.
double hy_fredholm(const Spectrum& sigma, double r, double s);
double hy_fredholm(const DensityMatrix& q, double r, double s);

/// Renormalized HY through log D^ren_{r,alpha}, r in (0,1). Throws
/// FractionalPowerOfNegative when the log-determinant is negative and s is
/// not an integer.
double hy_renormalized(const Spectrum& sigma, double r, double s,
                       std::optional<int> alpha = std::nullopt);

/// lambda_k for k = 1, 2, ...
using SpectrumGenerator = std::function<double(std::size_t)>;

struct ProbeResult {
  bool reached = false;
  std::size_t index = 0;     // smallest K with partial sum > threshold, or K_max
  double partial_sum = 0.0;  // sum_{k <= index} lambda_k^r
};

/// Scans partial sums of lambda_k^r until they exceed `threshold`.
ProbeResult i_r_divergence_probe(const SpectrumGenerator& lambda, double r, double threshold,
                                 std::size_t k_max);

enum class EntropyKind { vn, vn_ren, tsallis, renyi, hy, hy_fredholm, hy_ren };

std::optional<EntropyKind> parse_entropy_kind(std::string_view name) noexcept;
std::string_view to_string(EntropyKind kind) noexcept;

/// Dispatches one entropy evaluation with diagnostics. Throws DomainError for
/// parameters outside the kind's domain.
EntropyResult evaluate(EntropyKind kind, const DensityMatrix& q, const EntropyParams& params);

}  // namespace qent
