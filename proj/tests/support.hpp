#pragma once

// Seeded generators and independent oracles for the test suites. Nothing
// here calls into the library's numerical routines except validate_density,
// which is how states enter the typed API.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "qent/spectral.hpp"

namespace qtest {

using qent::CMatrix;
using qent::Complex;

// xoshiro256** seeded through splitmix64; independent of the library RNG.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    for (auto& word : s_) {
      seed += 0x9e3779b97f4a7c15ULL;
      std::uint64_t z = seed;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      word = z ^ (z >> 31);
    }
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t index(std::size_t lo, std::size_t hi) {  // inclusive
    return lo + static_cast<std::size_t>(next() % (hi - lo + 1));
  }
  double exponential() { return -std::log1p(-uniform()); }
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }
  Complex complex_normal() { return {normal(), normal()}; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
};

/// Normalized exponential draws; the last `zeros` entries are exactly 0.
inline std::vector<double> random_probabilities(Rng& rng, std::size_t d, std::size_t zeros = 0) {
  std::vector<double> p(d, 0.0);
  zeros = std::min(zeros, d - 1);
  double sum = 0.0;
  for (std::size_t i = 0; i + zeros < d; ++i) sum += (p[i] = rng.exponential());
  for (auto& x : p) x /= sum;
  return p;
}

/// Haar-like unitary: modified Gram-Schmidt on complex Gaussian columns.
inline CMatrix random_unitary(Rng& rng, std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  CMatrix u(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) u(i, j) = rng.complex_normal();
    for (Eigen::Index k = 0; k < j; ++k) {
      Complex proj{0.0, 0.0};
      for (Eigen::Index i = 0; i < n; ++i) proj += std::conj(u(i, k)) * u(i, j);
      for (Eigen::Index i = 0; i < n; ++i) u(i, j) -= proj * u(i, k);
    }
    double norm = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) norm += std::norm(u(i, j));
    norm = std::sqrt(norm);
    for (Eigen::Index i = 0; i < n; ++i) u(i, j) /= norm;
  }
  return u;
}

inline CMatrix hermitize(const CMatrix& m) { return (m + m.adjoint()) * 0.5; }

/// U diag(p) U^dagger, symmetrized so Hermiticity holds to rounding.
inline CMatrix conjugate_diag(const CMatrix& u, const std::vector<double>& p) {
  const auto n = static_cast<Eigen::Index>(p.size());
  CMatrix d = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) d(i, i) = p[static_cast<std::size_t>(i)];
  return hermitize(u * d * u.adjoint());
}

inline qent::DensityMatrix random_density(Rng& rng, std::size_t d, std::size_t zeros = 0) {
  return qent::validate_density(conjugate_diag(random_unitary(rng, d), random_probabilities(rng, d, zeros)));
}

/// |psi><psi| for a random unit vector on C^dA (x) C^dB.
inline qent::DensityMatrix random_pure(Rng& rng, std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  Eigen::VectorXcd psi(n);
  for (Eigen::Index i = 0; i < n; ++i) psi(i) = rng.complex_normal();
  psi /= psi.norm();
  return qent::validate_density(hermitize(psi * psi.adjoint()));
}

inline CMatrix diag_matrix(const std::vector<double>& p) {
  const auto n = static_cast<Eigen::Index>(p.size());
  CMatrix m = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = p[static_cast<std::size_t>(i)];
  return m;
}

// ---------------------------------------------------------------- oracles

/// Explicit 4-index partial trace: rho_A(i,k) = sum_j Q(i dB + j, k dB + j).
inline CMatrix oracle_partial_trace(const CMatrix& q, std::size_t da, std::size_t db, bool keep_a) {
  const std::size_t keep = keep_a ? da : db;
  CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(keep), static_cast<Eigen::Index>(keep));
  for (std::size_t i = 0; i < keep; ++i) {
    for (std::size_t k = 0; k < keep; ++k) {
      Complex acc{0.0, 0.0};
      const std::size_t traced = keep_a ? db : da;
      for (std::size_t j = 0; j < traced; ++j) {
        const std::size_t row = keep_a ? i * db + j : j * db + i;
        const std::size_t col = keep_a ? k * db + j : j * db + k;
        acc += q(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
      }
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = acc;
    }
  }
  return out;
}

/// Scalar oracles in long double, straight from the definitions.
inline long double oracle_power_sum(const std::vector<double>& p, long double r) {
  long double s = 0;
  for (double x : p) {
    if (x > 0) s += std::pow(static_cast<long double>(x), r);
  }
  return s;
}

inline long double oracle_von_neumann(const std::vector<double>& p) {
  long double s = 0;
  for (double x : p) {
    if (x > 0) s -= static_cast<long double>(x) * std::log(static_cast<long double>(x));
  }
  return s;
}

inline long double oracle_hu_ye(const std::vector<double>& p, long double r, long double s) {
  return (std::pow(oracle_power_sum(p, r), s) - 1) / ((1 - r) * s);
}

/// Entropy of the untruncated Schmidt distribution (1-t) t^N summed in
/// closed form: -ln(1-t) - t ln t / (1-t), with u = 1 - t = sech^2 r.
inline double oracle_geometric_entropy(double r) {
  if (r == 0.0) return 0.0;
  const long double e = std::exp(-2.0L * r);
  const long double u = 4 * e / ((1 + e) * (1 + e));
  return static_cast<double>(-std::log(u) - (1 - u) * std::log1p(-u) / u);
}

/// Brute-force Schmidt series -sum p_N ln p_N over N <= n_max, unrenormalized.
inline long double oracle_schmidt_series(double r, std::size_t n_max) {
  const long double t = std::pow(std::tanh(static_cast<long double>(r)), 2);
  long double p = 1 - t;
  long double s = 0;
  for (std::size_t n = 0; n <= n_max; ++n) {
    if (p > 0) s -= p * std::log(p);
    p *= t;
  }
  return s;
}

/// Trial-division primes.
inline std::vector<std::uint64_t> oracle_primes(std::size_t k) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 2; out.size() < k; ++n) {
    bool prime = true;
    for (std::uint64_t p : out) {
      if (p * p > n) break;
      if (n % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) out.push_back(n);
  }
  return out;
}

inline double max_abs_diff(const CMatrix& a, const CMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace qtest
