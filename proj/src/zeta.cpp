#include <cmath>
#include <sstream>

#include "qent/error.hpp"
#include "qent/fredholm.hpp"

namespace qent {

std::vector<std::uint64_t> first_k_primes(std::size_t k) {
  if (k == 0) return {};
  // p_k < k (ln k + ln ln k) for k >= 6
  std::size_t limit = 13;
  if (k >= 6) {
    const double kd = static_cast<double>(k);
    limit = static_cast<std::size_t>(kd * (std::log(kd) + std::log(std::log(kd)))) + 1;
  }
  std::vector<char> composite(limit + 1, 0);
  std::vector<std::uint64_t> primes;
  primes.reserve(k);
  for (std::size_t n = 2; n <= limit && primes.size() < k; ++n) {
    if (composite[n]) continue;
    primes.push_back(n);
    for (std::size_t multiple = n * n; multiple <= limit; multiple += n) composite[multiple] = 1;
  }
  return primes;
}

double zeta_ratio_product(double q, std::size_t k) {
  if (!(q > 1.0)) {
    std::ostringstream os;
    os << "Euler product needs q > 1, got q = " << q;
    throw Error(ErrorKind::DomainError, os.str());
  }
  double log_sum = 0.0;
  double comp = 0.0;
  for (std::uint64_t p : first_k_primes(k)) {
    const double term = std::log1p(std::pow(static_cast<double>(p), -q));
    const double y = term - comp;
    const double t = log_sum + y;
    comp = (t - log_sum) - y;
    log_sum = t;
  }
  return std::exp(log_sum);
}

double zeta_series(double q, double tol) {
  if (!(q > 1.0)) {
    std::ostringstream os;
    os << "zeta series needs q > 1, got q = " << q;
    throw Error(ErrorKind::DomainError, os.str());
  }
  if (!(tol > 0.0)) throw Error(ErrorKind::DomainError, "zeta tolerance must be positive");

  // Euler-Maclaurin through the B6 term; the B8 term bounds the remainder.
  const double rising7 = q * (q + 1) * (q + 2) * (q + 3) * (q + 4) * (q + 5) * (q + 6);
  double n = 16.0;
  while (rising7 * std::pow(n, -q - 7.0) / 1209600.0 > tol && n < 1e7) n *= 2.0;

  // Extended precision keeps summation rounding well under tol.
  const auto cutoff = static_cast<long>(n);
  const long double qq = q;
  const long double nn = n;
  long double partial = 0.0L;
  for (long i = cutoff - 1; i >= 1; --i) partial += std::pow(static_cast<long double>(i), -qq);

  const long double tail = std::pow(nn, 1 - qq) / (qq - 1) + 0.5L * std::pow(nn, -qq) +
                           qq * std::pow(nn, -qq - 1) / 12 -
                           qq * (qq + 1) * (qq + 2) * std::pow(nn, -qq - 3) / 720 +
                           qq * (qq + 1) * (qq + 2) * (qq + 3) * (qq + 4) * std::pow(nn, -qq - 5) / 30240;
  return static_cast<double>(partial + tail);
}

}  // namespace qent
