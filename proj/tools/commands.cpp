#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "qent/matrix_io.hpp"
#include "qent/rng.hpp"
#include "qent/spectral.hpp"
#include "qent/states.hpp"

namespace qent::cli {

using ordered_json = nlohmann::ordered_json;

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ParseError:
    case ErrorKind::IoError:
      return kIoError;
    case ErrorKind::NotHermitian:
    case ErrorKind::NotPositive:
    case ErrorKind::TraceNotOne:
    case ErrorKind::NotNormalized:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::ConstraintViolation:
      return kValidationError;
    default:
      return kDomainError;
  }
}

unsigned thread_count() {
  if (const char* env = std::getenv("QENT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

// Runs body(i) for i in [0, n) on up to `threads` workers. Results must be
// written to per-index slots; the first exception is rethrown after join.
template <class Body>
void parallel_for(std::size_t n, unsigned threads, Body body) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(run);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string flag(bool b) { return b ? "1" : "0"; }

ordered_json number_or_string(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_csv(const ExperimentReport& report) {
  std::ostringstream os;
  os << "# schema_version: " << kSchemaVersion << '\n';
  os << "# experiment: " << report.experiment << '\n';
  os << "# parameters: " << report.parameters.dump() << '\n';
  for (std::size_t i = 0; i < report.columns.size(); ++i) {
    os << (i ? "," : "") << report.columns[i];
  }
  os << '\n';
  for (const auto& row : report.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
  return os.str();
}

ordered_json summary_json(const ExperimentReport& report) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["experiment"] = report.experiment;
  j["parameters"] = report.parameters;
  j["summary"] = {{"records", report.record_count()},
                  {"pass_count", report.pass_count},
                  {"all_passed", report.all_passed()},
                  {"max_violation", number_or_string(report.max_violation)},
                  {"wall_time_s", report.wall_time_s}};
  return j;
}

int emit_report(const ExperimentReport& report, const std::optional<std::filesystem::path>& out_path,
                std::ostream& out, std::ostream& err) {
  const std::string csv = format_csv(report);
  const std::string summary = summary_json(report).dump(2);
  if (out_path) {
    std::ofstream file(*out_path, std::ios::binary);
    if (!(file << csv) || !file.flush()) {
      err << to_string(ErrorKind::IoError) << ": cannot write " << out_path->string() << '\n';
      return kIoError;
    }
    out << summary << '\n';
  } else {
    out << csv;
    err << summary << '\n';
  }
  return kOk;
}

// ------------------------------------------------------------------ entropy

ordered_json entropy_json(EntropyKind kind, const EntropyResult& result,
                          const EntropyParams& params) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = std::string(to_string(kind));
  j["value"] = number_or_string(result.value);
  j["method"] = std::string(to_string(result.method));
  j["divergent"] = result.divergent;
  ordered_json diag = ordered_json::object();
  if (result.diagnostics.trace_power) diag["trace_power"] = number_or_string(*result.diagnostics.trace_power);
  if (result.diagnostics.log_determinant) {
    diag["log_determinant"] = number_or_string(*result.diagnostics.log_determinant);
  }
  if (result.diagnostics.alpha) diag["alpha"] = *result.diagnostics.alpha;
  j["diagnostics"] = diag;
  ordered_json p;
  p["r"] = params.r;
  p["s"] = params.s;
  p["alpha"] = params.alpha ? ordered_json(*params.alpha) : ordered_json(nullptr);
  p["base"] = params.log_base == LogBase::two ? "2" : "e";
  j["parameters"] = p;
  return j;
}

int cmd_entropy(const EntropyCommand& cmd, std::ostream& out, std::ostream& err) {
  try {
    const auto kind = parse_entropy_kind(cmd.kind);
    if (!kind) {
      throw Error(ErrorKind::DomainError,
                  "unknown entropy kind '" + cmd.kind +
                      "' (expected vn, vn-ren, tsallis, renyi, hy, hy-fredholm, hy-ren)");
    }
    const DensityMatrix q = validate_density(read_matrix_file(cmd.input));
    const EntropyResult result = evaluate(*kind, q, cmd.params);
    out << entropy_json(*kind, result, cmd.params).dump(2) << '\n';
    return kOk;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return exit_code_for(e.kind());
  }
}

// ------------------------------------------------------------- X-states

namespace {

// HY on r > 1 goes through det_r; elsewhere through the trace power.
double hy_of(const DensityMatrix& q, double r, double s) {
  if (r > 1.0) return hy_fredholm(q, r, s);
  return hu_ye(eig_hermitian(q).spectrum, r, s);
}

}  // namespace

std::vector<XStateRecord> xstate_records(const XStateExperiment& exp) {
  for (std::size_t d : exp.d_list) {
    if (d < 2 || d > 8) {
      throw Error(ErrorKind::DomainError, "X-state dimension d=" + std::to_string(d) + " outside 2..8");
    }
  }
  const std::size_t n = exp.d_list.size() * exp.samples;
  std::vector<XStateRecord> records(n);
  parallel_for(n, exp.threads, [&](std::size_t idx) {
    const std::size_t d = exp.d_list[idx / exp.samples];
    const std::size_t sample = idx % exp.samples;
    const DensityMatrix q = x_state_sample(d, derive_seed(exp.seed, d), sample);
    XStateRecord& rec = records[idx];
    rec.d = d;
    rec.sample = sample;
    rec.hy_full = hy_of(q, exp.r, exp.s);
    rec.hy_a = hy_of(partial_trace(q, d, d, Subsystem::A), exp.r, exp.s);
    rec.hy_b = hy_of(partial_trace(q, d, d, Subsystem::B), exp.r, exp.s);
    rec.hy_diff = std::abs(rec.hy_a - rec.hy_b);
    rec.pass = rec.hy_diff <= rec.hy_full + kTriangleSlack;
  });
  return records;
}

ExperimentReport run_xstate_experiment(const XStateExperiment& exp) {
  const Stopwatch clock;
  ExperimentReport report;
  report.experiment = "xstate";
  report.parameters = {{"d_list", exp.d_list}, {"samples", exp.samples}, {"r", exp.r},
                       {"s", exp.s},           {"seed", exp.seed},       {"slack", kTriangleSlack},
                       {"hy_route", exp.r > 1.0 ? "fredholm" : "direct_spectral"}};
  report.columns = {"d", "sample", "hy_full", "hy_diff", "pass", "hy_a", "hy_b"};
  report.max_violation = -std::numeric_limits<double>::infinity();
  for (const auto& rec : xstate_records(exp)) {
    report.rows.push_back({std::to_string(rec.d), std::to_string(rec.sample), format_number(rec.hy_full),
                           format_number(rec.hy_diff), flag(rec.pass), format_number(rec.hy_a),
                           format_number(rec.hy_b)});
    report.pass_count += rec.pass;
    report.max_violation = std::max(report.max_violation, rec.hy_diff - rec.hy_full);
  }
  if (report.rows.empty()) report.max_violation = 0.0;
  report.wall_time_s = clock.seconds();
  return report;
}

// ------------------------------------------------------------- Gaussian

namespace {

struct GaussianRow {
  double r = 0.0;
  GaussianEntropy naive;
  GaussianEntropy stable;
  std::size_t n_max = 0;
  double tail_mass = 0.0;
  double schmidt = 0.0;
  double a = 0.0;
  double b = 0.0;
  double log_det = 0.0;
  std::string fredholm_flag = "ok";
};

// Truncation for a kSchmidtTail tail, capped so large r stays bounded; the
// recorded tail mass shows when the cap was hit.
std::size_t auto_truncation(double r) {
  try {
    return std::min(squeezed_truncation_for_tail(r, kSchmidtTail), kMaxSchmidtTerms);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DomainError) throw;
    return kMaxSchmidtTerms;
  }
}

GaussianRow gaussian_row(const GaussianExperiment& exp, double r) {
  GaussianRow row;
  row.r = r;
  row.naive = gaussian_entropy_analytic(r, EvalMode::naive);
  row.stable = gaussian_entropy_analytic(r, EvalMode::stable);
  row.n_max = exp.n_max ? *exp.n_max : auto_truncation(r);
  const SchmidtSpectrum schmidt = squeezed_schmidt_spectrum({r, row.n_max});
  row.tail_mass = schmidt.tail_mass;
  row.schmidt = von_neumann(schmidt.spectrum);
  row.a = exp.interval ? exp.interval->first : 0.0;
  row.b = exp.interval ? exp.interval->second : r;
  if (!(row.a < row.b)) {
    row.fredholm_flag = "empty-interval";
    return row;
  }
  try {
    row.log_det = log_fredholm_det(squeezed_kernel(), exp.z, row.a, row.b, exp.m);
  } catch (const Error& e) {
    row.log_det = std::numeric_limits<double>::quiet_NaN();
    row.fredholm_flag = e.kind() == ErrorKind::NonPositiveDeterminant ? "non-positive" : "non-finite";
  }
  return row;
}

}  // namespace

ExperimentReport run_gaussian_experiment(const GaussianExperiment& exp) {
  if (exp.r_grid.empty()) throw Error(ErrorKind::DomainError, "r grid is empty");
  for (double r : exp.r_grid) {
    if (!(r >= 0.0) || !std::isfinite(r)) {
      throw Error(ErrorKind::DomainError, "squeezing r=" + format_number(r) + " must be finite and >= 0");
    }
  }
  if (exp.m == 0) throw Error(ErrorKind::DomainError, "quadrature size m must be positive");
  const Stopwatch clock;
  std::vector<GaussianRow> rows(exp.r_grid.size());
  parallel_for(rows.size(), exp.threads, [&](std::size_t i) { rows[i] = gaussian_row(exp, exp.r_grid[i]); });

  ExperimentReport report;
  report.experiment = "gaussian";
  ordered_json p;
  p["r_grid"] = exp.r_grid;
  p["n_max"] = exp.n_max ? ordered_json(*exp.n_max) : ordered_json("auto");
  p["schmidt_tail_target"] = kSchmidtTail;
  p["m"] = exp.m;
  p["z"] = exp.z;
  p["interval"] = exp.interval ? ordered_json::array({exp.interval->first, exp.interval->second})
                               : ordered_json("[0, r]");
  p["kernel"] = "tanh(x+y)/cosh(x-y)";
  const bool calibrated = !exp.interval && exp.z == 1.0 && exp.m == 64;
  p["quadrature_profile"] = calibrated ? "calibrated, not from paper" : "user";
  report.parameters = p;
  report.columns = {"r",           "naive",     "naive_overflow", "naive_rounding_bound", "stable",
                    "n_max",       "tail_mass", "schmidt",        "a",                    "b",
                    "fredholm_log_det", "fredholm_flag", "gap", "pass"};
  for (const auto& row : rows) {
    // pass: the stable form is finite and, where the truncation is tight,
    // agrees with the Schmidt series.
    const bool tight = row.tail_mass < kSchmidtTail;
    const double rel = std::abs(row.stable.value - row.schmidt) / std::max(1.0, std::abs(row.stable.value));
    const bool pass = std::isfinite(row.stable.value) && (!tight || rel <= 1e-10);
    if (tight) report.max_violation = std::max(report.max_violation, rel);
    report.pass_count += pass;
    report.rows.push_back({format_number(row.r), format_number(row.naive.value), flag(row.naive.overflow),
                           format_number(row.naive.rounding_bound), format_number(row.stable.value),
                           std::to_string(row.n_max), format_number(row.tail_mass),
                           format_number(row.schmidt), format_number(row.a), format_number(row.b),
                           format_number(row.log_det), row.fredholm_flag,
                           format_number(row.stable.value - row.log_det), flag(pass)});
  }
  report.wall_time_s = clock.seconds();
  return report;
}

// ------------------------------------------------------------- zeta

ZetaRecord zeta_record(const ZetaCheck& check) {
  if (!(check.q > 1.0)) throw Error(ErrorKind::DomainError, "zeta check requires q > 1");
  if (!(check.r > 1.0)) throw Error(ErrorKind::DomainError, "zeta check requires r > 1");
  if (check.k == 0) throw Error(ErrorKind::DomainError, "zeta check requires k >= 1");
  ZetaRecord rec;
  rec.product = zeta_ratio_product(check.q, check.k);
  const Determinant det = det_r(zeta_spectrum(check.q, check.r, check.k, false), check.r);
  rec.log_det = det.log_value;
  rec.det = std::exp(det.log_value);
  rec.analytic = zeta_series(check.q) / zeta_series(2.0 * check.q);
  rec.abs_gap = rec.analytic - rec.det;
  rec.rel_gap = rec.abs_gap / rec.analytic;
  // Missing factors prod_{p > p_k} (1 + p^-q) <= exp(p_k^{1-q} / (q - 1)).
  const double p_k = static_cast<double>(first_k_primes(check.k).back());
  rec.tail_bound = rec.product * std::expm1(std::pow(p_k, 1.0 - check.q) / (check.q - 1.0));
  rec.pass = std::abs(rec.abs_gap) <= rec.tail_bound + 1e-10;
  return rec;
}

ExperimentReport run_zeta_check(const ZetaCheck& check) {
  const Stopwatch clock;
  const ZetaRecord rec = zeta_record(check);
  ExperimentReport report;
  report.experiment = "zeta";
  report.parameters = {{"q", check.q}, {"r", check.r}, {"k", check.k}, {"normalized", false}};
  report.columns = {"q", "r", "k", "product", "log_det", "det", "analytic", "abs_gap", "rel_gap",
                    "tail_bound", "pass"};
  report.rows.push_back({format_number(check.q), format_number(check.r), std::to_string(check.k),
                         format_number(rec.product), format_number(rec.log_det), format_number(rec.det),
                         format_number(rec.analytic), format_number(rec.abs_gap),
                         format_number(rec.rel_gap), format_number(rec.tail_bound), flag(rec.pass)});
  report.pass_count = rec.pass;
  report.max_violation = std::abs(rec.abs_gap) - rec.tail_bound;
  report.wall_time_s = clock.seconds();
  return report;
}

// ------------------------------------------------------------- quadrature

namespace {

std::optional<double> constant_analytic(double z, double a, double b) { return 1.0 + z * (b - a); }

std::optional<double> exp_rank_one_analytic(double z, double a, double b) {
  // integral of e^{2x} over [a, b]
  return 1.0 + z * 0.5 * (std::exp(2.0 * b) - std::exp(2.0 * a));
}

std::optional<double> no_analytic(double, double, double) { return std::nullopt; }

std::vector<std::pair<std::string, RegisteredKernel>> registry() {
  return {
      {"constant", {KernelSpec{[](double, double) { return 1.0; }, "constant", true}, constant_analytic}},
      {"exp-rank-one",
       {KernelSpec{[](double x, double y) { return std::exp(x + y); }, "exp-rank-one", true},
        exp_rank_one_analytic}},
      {"squeezed", {squeezed_kernel(), no_analytic}},
  };
}

}  // namespace

std::vector<std::string> kernel_names() {
  std::vector<std::string> names;
  for (const auto& [name, _] : registry()) names.push_back(name);
  return names;
}

RegisteredKernel find_kernel(const std::string& name) {
  for (auto& [key, kernel] : registry()) {
    if (key == name) return kernel;
  }
  std::string known;
  for (const auto& n : kernel_names()) known += (known.empty() ? "" : ", ") + n;
  throw Error(ErrorKind::DomainError, "unknown kernel '" + name + "'; registered: " + known);
}

ExperimentReport run_quad_test(const QuadTest& test) {
  const RegisteredKernel reg = find_kernel(test.kernel);
  if (test.m_list.empty()) throw Error(ErrorKind::DomainError, "m list is empty");
  const Stopwatch clock;
  const std::optional<double> reference = reg.analytic(test.z, test.a, test.b);
  ExperimentReport report;
  report.experiment = "quad";
  report.parameters = {{"kernel", test.kernel}, {"z", test.z},           {"a", test.a},
                       {"b", test.b},           {"m_list", test.m_list}};
  report.parameters["analytic"] = reference ? ordered_json(*reference) : ordered_json(nullptr);
  report.columns = {"m", "det", "diff_prev", "analytic", "abs_error", "pass"};
  std::optional<double> previous;
  for (std::size_t m : test.m_list) {
    const double det = fredholm_det(reg.kernel, test.z, test.a, test.b, m);
    const double diff = previous ? det - *previous : std::numeric_limits<double>::quiet_NaN();
    const double err = reference ? std::abs(det - *reference) : std::numeric_limits<double>::quiet_NaN();
    // Separable kernels are exact once m covers the kernel's polynomial
    // degree; others only need a finite determinant.
    const bool pass = std::isfinite(det) && (!reference || err <= 1e-8 * std::max(1.0, std::abs(*reference)));
    if (reference) report.max_violation = std::max(report.max_violation, err);
    report.pass_count += pass;
    report.rows.push_back({std::to_string(m), format_number(det), previous ? format_number(diff) : "",
                           reference ? format_number(*reference) : "", reference ? format_number(err) : "",
                           flag(pass)});
    previous = det;
  }
  report.wall_time_s = clock.seconds();
  return report;
}

}  // namespace qent::cli
