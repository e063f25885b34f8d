#pragma once

// Dense Hermitian linear algebra for finite-dimensional quantum states.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qent {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

namespace tol {
inline constexpr double kHermitian = 1e-12;
inline constexpr double kValidation = 1e-10;
inline constexpr double kReconstruction = 1e-10;
inline constexpr double kNormalization = 1e-10;
}  // namespace tol

struct DensityDiagnostics {
  double trace = 0.0;
  double hermiticity_defect = 0.0;
  double min_eigenvalue = 0.0;
};

/// Hermitian, positive semidefinite, unit-trace matrix. Only constructible
/// through validate_density, so every instance satisfies the invariants.
class DensityMatrix {
 public:
  const CMatrix& matrix() const noexcept { return data_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(data_.rows()); }
  const DensityDiagnostics& diagnostics() const noexcept { return diag_; }

 private:
  friend DensityMatrix validate_density(const CMatrix& m, double tolerance);
  DensityMatrix(CMatrix data, DensityDiagnostics diag) : data_(std::move(data)), diag_(diag) {}

  CMatrix data_;
  DensityDiagnostics diag_;
};

/// Sorted (non-increasing) non-negative eigenvalue sequence. Normalization is
/// tracked rather than required: some identities need unnormalized spectra.
class Spectrum {
 public:
  Spectrum() = default;

  /// Sorts the values. Entries in [-kValidation, 0) are clamped to zero;
  /// anything more negative throws DomainError.
  static Spectrum from_values(std::vector<double> values);

  /// Same as from_values but additionally requires |sum - 1| <= kNormalization.
  static Spectrum normalized(std::vector<double> values);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  double operator[](std::size_t i) const { return values_[i]; }
  bool is_normalized() const noexcept { return normalized_; }
  double sum() const noexcept;

 private:
  std::vector<double> values_;
  bool normalized_ = false;
};

class UnitaryMatrix {
 public:
  /// Throws DomainError when U^dagger U deviates from identity by more than 1e-10 per entry.
  explicit UnitaryMatrix(CMatrix u);

  const CMatrix& matrix() const noexcept { return data_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(data_.rows()); }

 private:
  CMatrix data_;
};

struct Eigendecomposition {
  Spectrum spectrum;
  UnitaryMatrix vectors;  // columns are eigenvectors, aligned with spectrum order
};

enum class Subsystem { A, B };

using ScalarMap = std::function<double(double)>;

DensityMatrix validate_density(const CMatrix& m, double tolerance = tol::kValidation);

/// Eigenvalues in non-increasing order together with the unitary that
/// diagonalizes q. Equal eigenvalues keep the solver's order.
Eigendecomposition eig_hermitian(const DensityMatrix& q);

/// Eigenvalues of an arbitrary Hermitian matrix, non-increasing, unclamped.
std::vector<double> hermitian_eigenvalues(const CMatrix& h);

/// U diag(f(lambda)) U^dagger. f is evaluated on the clamped spectrum, so
/// f(0) must already encode the lambda -> 0+ limit (see the maps below).
CMatrix matrix_function(const DensityMatrix& q, const ScalarMap& f);

DensityMatrix partial_trace(const DensityMatrix& q, std::size_t dim_a, std::size_t dim_b,
                            Subsystem keep);

/// (sum s_i^p)^(1/p) over singular values. p in (0,1) gives the quasi-norm.
double schatten_norm(const CMatrix& a, double p);

/// Raw power sum sum s_i^p; for a PSD input this is Tr A^p.
double schatten_power_sum(const CMatrix& a, double p);

/// ||a - b||_1 (the full trace norm, without the conventional 1/2).
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

// Scalar maps with their lambda -> 0+ limits built in.
namespace scalar {
double neg_x_log_x(double x);           // -x ln x, 0 at x = 0
double self_power_minus_one(double x);  // x^(-x) - 1, 0 at x = 0
}  // namespace scalar

}  // namespace qent
