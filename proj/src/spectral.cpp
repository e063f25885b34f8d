#include "qent/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qent/error.hpp"

namespace qent {

namespace {

std::string describe(const char* what, double value) {
  std::ostringstream os;
  os.precision(6);
  os << what << " " << value;
  return os.str();
}

void require_square(const CMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    std::ostringstream os;
    os << "matrix must be square and non-empty, got " << m.rows() << "x" << m.cols();
    throw Error(ErrorKind::DimensionMismatch, os.str());
  }
}

double max_hermiticity_defect(const CMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

Eigen::SelfAdjointEigenSolver<CMatrix> solve(const CMatrix& h, bool vectors) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, vectors ? Eigen::ComputeEigenvectors
                                                       : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::ConvergenceFailure,
                "Hermitian eigensolver did not converge for dim " + std::to_string(h.rows()));
  }
  return es;
}

}  // namespace

double Spectrum::sum() const noexcept {
  return std::accumulate(values_.begin(), values_.end(), 0.0);
}

Spectrum Spectrum::from_values(std::vector<double> values) {
  for (double& v : values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::DomainError, "spectrum contains a non-finite value");
    }
    if (v < 0.0) {
      if (v < -tol::kValidation) {
        throw Error(ErrorKind::DomainError, describe("spectrum has negative entry", v));
      }
      v = 0.0;
    }
  }
  // stable_sort keeps solver order among ties
  std::stable_sort(values.begin(), values.end(), std::greater<>());
  Spectrum s;
  s.values_ = std::move(values);
  s.normalized_ = !s.values_.empty() && std::abs(s.sum() - 1.0) <= tol::kNormalization;
  return s;
}

Spectrum Spectrum::normalized(std::vector<double> values) {
  Spectrum s = from_values(std::move(values));
  if (!s.normalized_) {
    throw Error(ErrorKind::NotNormalized, describe("spectrum sum deviates from 1, sum =", s.sum()));
  }
  return s;
}

UnitaryMatrix::UnitaryMatrix(CMatrix u) : data_(std::move(u)) {
  require_square(data_);
  const CMatrix gram = data_.adjoint() * data_;
  const double defect =
      (gram - CMatrix::Identity(data_.rows(), data_.cols())).cwiseAbs().maxCoeff();
  if (defect > tol::kValidation) {
    throw Error(ErrorKind::DomainError, describe("matrix is not unitary, defect", defect));
  }
}

DensityMatrix validate_density(const CMatrix& m, double tolerance) {
  require_square(m);
  DensityDiagnostics d;
  d.hermiticity_defect = max_hermiticity_defect(m);
  d.trace = m.trace().real();
  if (d.hermiticity_defect > tol::kHermitian) {
    throw Error(ErrorKind::NotHermitian,
                describe("max |M(i,j) - conj(M(j,i))| =", d.hermiticity_defect));
  }
  const auto es = solve(m, false);
  d.min_eigenvalue = es.eigenvalues().minCoeff();
  if (d.min_eigenvalue < -tolerance) {
    throw Error(ErrorKind::NotPositive, describe("minimum eigenvalue", d.min_eigenvalue));
  }
  if (std::abs(d.trace - 1.0) > tolerance) {
    throw Error(ErrorKind::TraceNotOne, describe("trace", d.trace));
  }
  return DensityMatrix(m, d);
}

Eigendecomposition eig_hermitian(const DensityMatrix& q) {
  const auto es = solve(q.matrix(), true);
  const Eigen::Index n = es.eigenvalues().size();
  // Eigen returns ascending order; reverse into non-increasing.
  std::vector<double> values(static_cast<std::size_t>(n));
  CMatrix u(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    values[static_cast<std::size_t>(i)] = es.eigenvalues()(n - 1 - i);
    u.col(i) = es.eigenvectors().col(n - 1 - i);
  }
  for (double& v : values) {
    if (v < 0.0 && v >= -tol::kValidation) v = 0.0;
  }
  // Already sorted, so from_values does not permute and U stays aligned.
  return Eigendecomposition{Spectrum::from_values(std::move(values)), UnitaryMatrix(std::move(u))};
}

std::vector<double> hermitian_eigenvalues(const CMatrix& h) {
  require_square(h);
  const auto es = solve(h, false);
  std::vector<double> out(es.eigenvalues().data(),
                          es.eigenvalues().data() + es.eigenvalues().size());
  std::reverse(out.begin(), out.end());
  return out;
}

CMatrix matrix_function(const DensityMatrix& q, const ScalarMap& f) {
  const Eigendecomposition e = eig_hermitian(q);
  const auto n = static_cast<Eigen::Index>(q.dim());
  RVector fv(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lambda = e.spectrum[static_cast<std::size_t>(i)];
    const double v = f(lambda);
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::DomainError, describe("matrix function is non-finite at eigenvalue", lambda));
    }
    fv(i) = v;
  }
  const CMatrix& u = e.vectors.matrix();
  return u * fv.asDiagonal() * u.adjoint();
}

DensityMatrix partial_trace(const DensityMatrix& q, std::size_t dim_a, std::size_t dim_b,
                            Subsystem keep) {
  if (dim_a == 0 || dim_b == 0 || dim_a * dim_b != q.dim()) {
    std::ostringstream os;
    os << "dA*dB = " << dim_a * dim_b << " but state has dim " << q.dim();
    throw Error(ErrorKind::DimensionMismatch, os.str());
  }
  const auto da = static_cast<Eigen::Index>(dim_a);
  const auto db = static_cast<Eigen::Index>(dim_b);
  const CMatrix& m = q.matrix();
  CMatrix out;
  if (keep == Subsystem::A) {
    out = CMatrix::Zero(da, da);
    for (Eigen::Index i = 0; i < da; ++i)
      for (Eigen::Index j = 0; j < da; ++j)
        for (Eigen::Index k = 0; k < db; ++k) out(i, j) += m(i * db + k, j * db + k);
  } else {
    out = CMatrix::Zero(db, db);
    for (Eigen::Index i = 0; i < db; ++i)
      for (Eigen::Index j = 0; j < db; ++j)
        for (Eigen::Index k = 0; k < da; ++k) out(i, j) += m(k * db + i, k * db + j);
  }
  return validate_density(out);
}

double schatten_power_sum(const CMatrix& a, double p) {
  if (!(p > 0.0)) {
    throw Error(ErrorKind::DomainError, describe("Schatten exponent must be positive, got", p));
  }
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(a);
  double total = 0.0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    const double s = svd.singularValues()(i);
    if (s > 0.0) total += std::pow(s, p);
  }
  return total;
}

double schatten_norm(const CMatrix& a, double p) {
  return std::pow(schatten_power_sum(a, p), 1.0 / p);
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "trace distance needs equal dimensions, got " +
                                                  std::to_string(a.dim()) + " and " +
                                                  std::to_string(b.dim()));
  }
  const CMatrix diff = a.matrix() - b.matrix();
  double total = 0.0;
  for (double v : hermitian_eigenvalues(diff)) total += std::abs(v);
  return total;
}

namespace scalar {

double neg_x_log_x(double x) { return x > 0.0 ? -x * std::log(x) : 0.0; }

double self_power_minus_one(double x) {
  // x^(-x) - 1 = expm1(-x ln x)
  return x > 0.0 ? std::expm1(-x * std::log(x)) : 0.0;
}

}  // namespace scalar

}  // namespace qent
