#pragma once

// Generators for the state families used in the experiments.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qent/entropy.hpp"
#include "qent/fredholm.hpp"
#include "qent/spectral.hpp"

namespace qent {

// ---------------------------------------------------------------- X-states

/// X-shaped state on C^d (x) C^d, n = d^2. With 1-based indices and
/// l = floor(n/4):
///   diagonal  a_1 .. a_n
///   outer     w_i at (i, n+1-i),                i = 1..l
///   inner     z_i at (l+i, n-l+1-i),            i = 1..l
/// and conjugates mirrored across the diagonal. For odd n the central
/// entry is uncoupled.
struct XStateParams {
  std::size_t d = 2;
  std::vector<double> a;
  std::vector<Complex> outer;  // w
  std::vector<Complex> inner;  // z
};

/// l = floor(d^2 / 4).
std::size_t x_state_pair_count(std::size_t d) noexcept;

/// Checks sum a = 1, a >= 0 and the per-pair Schur bounds
/// |w_i|^2 <= a_i a_{n+1-i}, |z_i|^2 <= a_{l+i} a_{n-l+1-i}.
/// Throws ConstraintViolation naming the first failure.
void check_x_state_params(const XStateParams& params);

DensityMatrix x_state(const XStateParams& params);

/// Diagonal from normalized Exp(1) draws, coupling magnitudes u * (Schur
/// bound) with u uniform in [0,1), phases uniform. Requires 2 <= d <= 8.
XStateParams x_state_random_params(std::size_t d, std::uint64_t seed);
DensityMatrix x_state_random(std::size_t d, std::uint64_t seed);

/// Sample `index` of a batch driven by `master_seed`.
DensityMatrix x_state_sample(std::size_t d, std::uint64_t master_seed, std::uint64_t index);

// ------------------------------------------------------- infinite spectra

/// lambda_k = k^{-(1+eps)} normalized over k = 1..K.
Spectrum power_law_spectrum(double eps, std::size_t k);

/// lambda_k = k^{-(1+eps)} / zeta(1+eps), the untruncated state.
SpectrumGenerator power_law_generator(double eps);

struct SplicedSpectrum {
  Spectrum spectrum;
  std::size_t head_length = 0;
  std::size_t tail_length = 0;
  double l1_distance = 0.0;     // to the input spectrum, same eigenbasis
  double probe_exponent = 0.0;  // 1/(1+eps)
  double power_sum = 0.0;       // sum lambda^{probe_exponent} of the result
};

/// Keeps sigma as the head (scaled by 1 - t) and appends a k^{-(1+eps)} tail
/// of mass t = min(0.45 delta, 0.9). The tail is lengthened until the power
/// sum at s = 1/(1+eps) exceeds `threshold`; for s below that exponent the
/// sum is only larger. Both bounds are measured on the result. Throws
/// TruncationInsufficient if the total length would pass `max_length`.
SplicedSpectrum splice_spectrum(const Spectrum& sigma, double eps, double delta, double threshold,
                                std::size_t max_length = std::size_t{1} << 24);

/// lambda_n proportional to 1 / (n ln^beta n), n = 2 .. K+1, normalized.
Spectrum log_power_spectrum(double beta, std::size_t k);

/// lambda_i = (ln(1 + p_i^{-q}))^{1/r} over the first k primes, optionally
/// divided by their sum.
Spectrum zeta_spectrum(double q, double r, std::size_t k, bool normalized);

// ------------------------------------------------- two-mode squeezed state

struct SqueezedParams {
  double r = 1.0;
  std::size_t n_max = 100;
};

struct SchmidtSpectrum {
  Spectrum spectrum;
  double tail_mass = 0.0;  // (tanh^2 r)^{n_max + 1}, before renormalization
};

/// p_N = (1 - t) t^N, t = tanh^2 r, N = 0..n_max, renormalized.
SchmidtSpectrum squeezed_schmidt_spectrum(const SqueezedParams& params);

/// Smallest n_max whose tail mass is below `tail`.
std::size_t squeezed_truncation_for_tail(double r, double tail);

enum class EvalMode { naive, stable };

struct GaussianEntropy {
  double value = 0.0;
  bool overflow = false;       // naive only: the literal formula was non-finite
  double rounding_bound = 0.0;  // naive only: eps (|c ln c| + |s ln s|), first-order cancellation error
};

/// cosh^2 r ln cosh^2 r - sinh^2 r ln sinh^2 r. The naive mode evaluates it
/// as written (with 0 ln 0 = 0). The stable mode uses
/// ln c + (c - 1) ln(c/(c - 1)), c = cosh^2 r, with ln c and 1/sinh^2 r
/// taken from exp(-2r), so it stays finite for any r >= 0.
GaussianEntropy gaussian_entropy_analytic(double r, EvalMode mode);

/// K(x, y) = tanh(x + y) / cosh(x - y).
KernelSpec squeezed_kernel();

// ------------------------------------------------------------------ misc

/// Diagonal density matrix with the given (normalized) spectrum.
DensityMatrix diag_state(const Spectrum& sigma);

}  // namespace qent
