#include "qent/fredholm.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qent/error.hpp"

namespace qent {

namespace {

struct LegendreValue {
  double p;   // P_m(x)
  double dp;  // P_m'(x)
};

LegendreValue legendre(std::size_t m, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (std::size_t k = 2; k <= m; ++k) {
    const double kk = static_cast<double>(k);
    const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
    p0 = p1;
    p1 = p2;
  }
  const double md = static_cast<double>(m);
  if (m == 0) return {1.0, 0.0};
  // P_m' = m (x P_m - P_{m-1}) / (x^2 - 1); roots never reach x = +-1
  return {p1, md * (x * p1 - p0) / (x * x - 1.0)};
}

constexpr int kMaxNewtonIterations = 100;
constexpr double kNewtonStep = 1e-15;

}  // namespace

QuadratureRule gauss_legendre(std::size_t m, double a, double b) {
  if (m == 0) throw Error(ErrorKind::DomainError, "quadrature needs m >= 1");
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw Error(ErrorKind::DomainError, "quadrature needs finite a < b");
  }
  std::vector<double> x(m);
  std::vector<double> w(m);
  const double md = static_cast<double>(m);
  // Roots are symmetric: solve the upper half and mirror.
  for (std::size_t i = 0; i < (m + 1) / 2; ++i) {
    double root = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (md + 0.5));
    LegendreValue v{};
    int iter = 0;
    for (;; ++iter) {
      if (iter >= kMaxNewtonIterations) {
        std::ostringstream os;
        os << "Legendre root " << i << " of degree " << m << " did not converge";
        throw Error(ErrorKind::ConvergenceFailure, os.str());
      }
      v = legendre(m, root);
      const double step = v.p / v.dp;
      root -= step;
      if (std::abs(step) <= kNewtonStep) break;
    }
    v = legendre(m, root);
    const double weight = 2.0 / ((1.0 - root * root) * v.dp * v.dp);
    x[m - 1 - i] = root;
    x[i] = -root;
    w[m - 1 - i] = weight;
    w[i] = weight;
  }
  if (m % 2 == 1) x[m / 2] = 0.0;

  QuadratureRule rule;
  rule.a = a;
  rule.b = b;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (std::size_t i = 0; i < m; ++i) {
    rule.nodes[i] = mid + half * x[i];
    rule.weights[i] = half * w[i];
  }
  return rule;
}

RMatrix nystrom_matrix(const KernelSpec& kernel, double z, const QuadratureRule& rule,
                       NystromForm form) {
  const std::size_t m = rule.size();
  if (m > kMaxNystromSize) {
    throw Error(ErrorKind::DomainError, "Nystrom size " + std::to_string(m) + " exceeds " +
                                            std::to_string(kMaxNystromSize));
  }
  const auto n = static_cast<Eigen::Index>(m);
  std::vector<double> sw(m);
  for (std::size_t i = 0; i < m; ++i) sw[i] = std::sqrt(rule.weights[i]);

  RMatrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto iu = static_cast<std::size_t>(i);
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto ju = static_cast<std::size_t>(j);
      const double k = kernel.evaluate(rule.nodes[iu], rule.nodes[ju]);
      if (!std::isfinite(k)) {
        std::ostringstream os;
        os << "kernel " << kernel.name << " is non-finite at (" << rule.nodes[iu] << ", "
           << rule.nodes[ju] << ")";
        throw Error(ErrorKind::NonFiniteKernel, os.str());
      }
      const double scale = form == NystromForm::symmetrized ? sw[iu] * sw[ju] : rule.weights[ju];
      out(i, j) = (i == j ? 1.0 : 0.0) + z * scale * k;
    }
  }
  return out;
}

LogDeterminant lu_log_determinant(RMatrix a) {
  const Eigen::Index n = a.rows();
  LogDeterminant out;
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index pivot = k;
    double best = std::abs(a(k, k));
    for (Eigen::Index i = k + 1; i < n; ++i) {
      if (std::abs(a(i, k)) > best) {
        best = std::abs(a(i, k));
        pivot = i;
      }
    }
    if (best == 0.0) {
      out.sign = 0;
      out.log_abs = -std::numeric_limits<double>::infinity();
      return out;
    }
    if (pivot != k) {
      a.row(k).swap(a.row(pivot));
      out.sign = -out.sign;
    }
    const double d = a(k, k);
    if (d < 0.0) out.sign = -out.sign;
    out.log_abs += std::log(std::abs(d));
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const double factor = a(i, k) / d;
      if (factor == 0.0) continue;
      a.row(i).tail(n - k - 1) -= factor * a.row(k).tail(n - k - 1);
    }
  }
  return out;
}

double fredholm_det(const KernelSpec& kernel, double z, double a, double b, std::size_t m,
                    NystromForm form) {
  const LogDeterminant ld = lu_log_determinant(nystrom_matrix(kernel, z, gauss_legendre(m, a, b), form));
  if (ld.sign == 0) return 0.0;
  return ld.sign * std::exp(ld.log_abs);
}

double log_fredholm_det(const KernelSpec& kernel, double z, double a, double b, std::size_t m,
                        NystromForm form) {
  const LogDeterminant ld = lu_log_determinant(nystrom_matrix(kernel, z, gauss_legendre(m, a, b), form));
  if (ld.sign <= 0) {
    throw Error(ErrorKind::NonPositiveDeterminant,
                "Nystrom determinant for kernel " + kernel.name + " is not positive");
  }
  return ld.log_abs;
}

}  // namespace qent
