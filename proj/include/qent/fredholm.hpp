#pragma once

// Fredholm determinants of integral operators by Gauss-Legendre Nystrom
// discretization, and the prime/zeta utilities behind the Euler-product
// determinant identity.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qent {

using RMatrix = Eigen::MatrixXd;

struct QuadratureRule {
  double a = -1.0;
  double b = 1.0;
  std::vector<double> nodes;    // strictly increasing, in (a, b)
  std::vector<double> weights;  // positive, summing to b - a
  std::size_t size() const noexcept { return nodes.size(); }
};

/// m-point Gauss-Legendre rule on [a, b]. Roots come from Newton iteration
/// on the three-term recurrence, seeded with Chebyshev-like guesses; throws
/// ConvergenceFailure if any root needs more than 100 iterations.
QuadratureRule gauss_legendre(std::size_t m, double a, double b);

struct KernelSpec {
  std::function<double(double, double)> evaluate;
  std::string name;
  bool symmetric = false;
};

enum class NystromForm {
  symmetrized,    // delta_ij + z sqrt(w_i) K(x_i, x_j) sqrt(w_j)
  unsymmetrized,  // delta_ij + z K(x_i, x_j) w_j
};

inline constexpr std::size_t kMaxNystromSize = 10000;

/// The m x m Nystrom matrix. Throws NonFiniteKernel if K is not finite at a node pair.
RMatrix nystrom_matrix(const KernelSpec& kernel, double z, const QuadratureRule& rule,
                       NystromForm form = NystromForm::symmetrized);

/// log |det A| and sign(det A) from an LU factorization with partial pivoting.
struct LogDeterminant {
  double log_abs = 0.0;
  int sign = 1;  // -1, 0 or +1
};

LogDeterminant lu_log_determinant(RMatrix a);

double fredholm_det(const KernelSpec& kernel, double z, double a, double b, std::size_t m,
                    NystromForm form = NystromForm::symmetrized);

/// Sum of log pivots; throws NonPositiveDeterminant when det <= 0.
double log_fredholm_det(const KernelSpec& kernel, double z, double a, double b, std::size_t m,
                        NystromForm form = NystromForm::symmetrized);

std::vector<std::uint64_t> first_k_primes(std::size_t k);

/// prod_{i <= k} (1 + p_i^{-q}).
double zeta_ratio_product(double q, std::size_t k);

/// Riemann zeta by a partial sum with an Euler-Maclaurin tail; |error| <= tol.
double zeta_series(double q, double tol = 1e-15);

}  // namespace qent
