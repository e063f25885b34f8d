#pragma once

// Command implementations behind the qent executable. Each command is a
// plain function so it can be driven in-process by the tests.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qent/entropy.hpp"
#include "qent/error.hpp"
#include "qent/fredholm.hpp"

namespace qent::cli {

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { kOk = 0, kIoError = 2, kValidationError = 3, kDomainError = 4 };

int exit_code_for(ErrorKind kind) noexcept;

/// Worker count: QENT_THREADS if set and positive, else hardware concurrency.
unsigned thread_count();

struct ExperimentReport {
  std::string experiment;
  nlohmann::ordered_json parameters;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::size_t pass_count = 0;
  double max_violation = 0.0;
  double wall_time_s = 0.0;

  std::size_t record_count() const noexcept { return rows.size(); }
  bool all_passed() const noexcept { return pass_count == rows.size(); }
};

/// CSV with '#'-prefixed metadata lines (schema version, experiment,
/// parameters) ahead of the header row.
std::string format_csv(const ExperimentReport& report);
nlohmann::ordered_json summary_json(const ExperimentReport& report);

/// Shortest round-trip decimal form; "inf", "-inf", "nan" for non-finite.
std::string format_number(double v);

// ------------------------------------------------------------------ entropy

struct EntropyCommand {
  std::filesystem::path input;
  std::string kind;
  EntropyParams params;
};

nlohmann::ordered_json entropy_json(EntropyKind kind, const EntropyResult& result,
                                    const EntropyParams& params);

/// Writes the JSON result to `out`, or an error message to `err`. Returns the exit code.
int cmd_entropy(const EntropyCommand& cmd, std::ostream& out, std::ostream& err);

// ------------------------------------------------------------- experiments

struct XStateExperiment {
  std::vector<std::size_t> d_list{2, 3, 4, 5};
  std::size_t samples = 100;
  double r = 2.0;
  double s = 0.5;
  std::uint64_t seed = 2024;
  unsigned threads = 1;
};

struct XStateRecord {
  std::size_t d = 0;
  std::size_t sample = 0;
  double hy_full = 0.0;
  double hy_a = 0.0;
  double hy_b = 0.0;
  double hy_diff = 0.0;
  bool pass = false;
};

inline constexpr double kTriangleSlack = 1e-10;

std::vector<XStateRecord> xstate_records(const XStateExperiment& exp);
ExperimentReport run_xstate_experiment(const XStateExperiment& exp);

struct GaussianExperiment {
  std::vector<double> r_grid;
  std::optional<std::size_t> n_max;  // nullopt: per-row truncation for a 1e-14 tail
  std::size_t m = 64;
  double z = 1.0;
  std::optional<std::pair<double, double>> interval;  // nullopt: [0, r] per row
  unsigned threads = 1;
};

inline constexpr double kSchmidtTail = 1e-14;
inline constexpr std::size_t kMaxSchmidtTerms = 2'000'000;

ExperimentReport run_gaussian_experiment(const GaussianExperiment& exp);

struct ZetaCheck {
  double q = 2.0;
  double r = 2.0;
  std::size_t k = 100000;
};

struct ZetaRecord {
  double product = 0.0;
  double log_det = 0.0;
  double det = 0.0;
  double analytic = 0.0;
  double abs_gap = 0.0;
  double rel_gap = 0.0;
  double tail_bound = 0.0;
  bool pass = false;
};

ZetaRecord zeta_record(const ZetaCheck& check);
ExperimentReport run_zeta_check(const ZetaCheck& check);

struct RegisteredKernel {
  KernelSpec kernel;
  /// 1 + z * integral for separable kernels.
  std::optional<double> (*analytic)(double z, double a, double b);
};

std::vector<std::string> kernel_names();
/// Throws DomainError listing the registry for unknown names.
RegisteredKernel find_kernel(const std::string& name);

struct QuadTest {
  std::string kernel = "constant";
  double z = 1.0;
  double a = 0.0;
  double b = 1.0;
  std::vector<std::size_t> m_list{5, 10, 20};
};

ExperimentReport run_quad_test(const QuadTest& test);

/// Emits `report`: CSV to `out_path` (and the JSON summary to `out`) when a
/// path is given, otherwise CSV to `out` and the summary to `err`.
int emit_report(const ExperimentReport& report, const std::optional<std::filesystem::path>& out_path,
                std::ostream& out, std::ostream& err);

}  // namespace qent::cli
