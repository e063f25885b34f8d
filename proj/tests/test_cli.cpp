#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "commands.hpp"
#include "qent/matrix_io.hpp"
#include "qent/rng.hpp"
#include "qent/states.hpp"
#include "support.hpp"

using namespace qent;
using namespace qent::cli;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("qent_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path write(const std::string& name, const CMatrix& m) const {
    const fs::path p = path / name;
    write_matrix_file(p, m);
    return p;
  }
  fs::path write_text(const std::string& name, const std::string& text) const {
    const fs::path p = path / name;
    std::ofstream(p) << text;
    return p;
  }
};

struct Run {
  int code;
  nlohmann::json json;
  std::string err;
};

Run entropy(const fs::path& input, const std::string& kind, EntropyParams params = {}) {
  std::ostringstream out, err;
  const int code = cmd_entropy({input, kind, params}, out, err);
  Run run{code, nullptr, err.str()};
  if (code == kOk) run.json = nlohmann::json::parse(out.str());
  return run;
}

CMatrix bell() {
  CMatrix m = CMatrix::Zero(4, 4);
  m(0, 0) = m(0, 3) = m(3, 0) = m(3, 3) = 0.5;
  return m;
}

std::size_t column(const ExperimentReport& report, const std::string& name) {
  for (std::size_t i = 0; i < report.columns.size(); ++i) {
    if (report.columns[i] == name) return i;
  }
  FAIL("missing column " << name);
  return 0;
}

double cell(const ExperimentReport& report, std::size_t row, const std::string& name) {
  return std::stod(report.rows[row][column(report, name)]);
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("entropy command values") {
  TempDir dir;
  const Run half = entropy(dir.write("half.json", CMatrix::Identity(2, 2) * 0.5), "vn");
  REQUIRE(half.code == kOk);
  CHECK(half.json["value"].get<double>() == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(half.json["method"] == "direct-spectral");

  EntropyParams hy{2.0, 0.5, std::nullopt, LogBase::natural};
  const Run b = entropy(dir.write("bell.json", bell()), "hy", hy);
  REQUIRE(b.code == kOk);
  CHECK(std::abs(b.json["value"].get<double>()) < 1e-12);

  const Run mixed = entropy(dir.write("mixed.json", qtest::diag_matrix({0.7, 0.3})), "hy", hy);
  REQUIRE(mixed.code == kOk);
  const double oracle = static_cast<double>(qtest::oracle_hu_ye({0.7, 0.3}, 2.0L, 0.5L));
  CHECK(mixed.json["value"].get<double>() == doctest::Approx(oracle).epsilon(1e-14));
  CHECK(mixed.json["value"].get<double>() == doctest::Approx(0.476846).epsilon(1e-6));

  const Run fred = entropy(dir.path / "mixed.json", "hy-fredholm", hy);
  REQUIRE(fred.code == kOk);
  CHECK(fred.json["value"].get<double>() == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(fred.json["method"] == "fredholm");

  EntropyParams bits;
  bits.log_base = LogBase::two;
  const Run vn2 = entropy(dir.path / "half.json", "vn", bits);
  REQUIRE(vn2.code == kOk);
  CHECK(vn2.json["value"].get<double>() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("entropy command exit codes") {
  TempDir dir;
  const Run missing = entropy(dir.path / "absent.json", "vn");
  CHECK(missing.code == kIoError);
  CHECK_FALSE(missing.err.empty());

  CHECK(entropy(dir.write_text("broken.json", "{\"dim\": 2, \"re\": [[1, 0]"), "vn").code == kIoError);
  CHECK(entropy(dir.write_text("shape.json", R"({"dim": 2, "re": [[1, 0]], "im": [[0, 0]]})"), "vn").code ==
        kIoError);

  CMatrix not_hermitian = qtest::diag_matrix({0.5, 0.5});
  not_hermitian(0, 1) = 0.1;
  const Run nh = entropy(dir.write("nh.json", not_hermitian), "vn");
  CHECK(nh.code == kValidationError);
  CHECK(nh.err.find("NotHermitian") != std::string::npos);
  CHECK(entropy(dir.write("neg.json", qtest::diag_matrix({1.5, -0.5})), "vn").code == kValidationError);
  CHECK(entropy(dir.write("trace.json", qtest::diag_matrix({0.5, 0.4})), "vn").code == kValidationError);

  const fs::path ok = dir.write("ok.json", qtest::diag_matrix({0.7, 0.3}));
  CHECK(entropy(ok, "nonsense").code == kDomainError);
  EntropyParams bad_r{1.0, 1.0, std::nullopt, LogBase::natural};
  CHECK(entropy(ok, "tsallis", bad_r).code == kDomainError);
  EntropyParams bits;
  bits.log_base = LogBase::two;
  CHECK(entropy(ok, "tsallis", bits).code == kDomainError);
  EntropyParams fractional{0.5, 0.5, 2, LogBase::natural};
  CHECK(entropy(ok, "hy-ren", fractional).code == kDomainError);
}

TEST_CASE("X-state experiment") {
  const ExperimentReport report = run_xstate_experiment({});
  CHECK(report.record_count() == 400);
  CHECK(report.all_passed());
  CHECK(report.max_violation <= 0.0);
  CHECK(report.columns[0] == "d");
  CHECK(report.columns[4] == "pass");

  XStateExperiment empty;
  empty.samples = 0;
  const ExperimentReport none = run_xstate_experiment(empty);
  CHECK(none.record_count() == 0);
  CHECK(none.all_passed());

  XStateExperiment small;
  small.samples = 20;
  const std::string first = format_csv(run_xstate_experiment(small));
  CHECK(format_csv(run_xstate_experiment(small)) == first);
  small.threads = 3;
  CHECK(format_csv(run_xstate_experiment(small)) == first);
  CHECK(first.rfind("# schema_version: 1\n", 0) == 0);
  CHECK(first.find("\"seed\":2024") != std::string::npos);

  XStateExperiment bad;
  bad.d_list = {9};
  CHECK_THROWS_AS(run_xstate_experiment(bad), Error);
}

TEST_CASE("X-state records reproduce from seed and index") {
  XStateExperiment exp;
  exp.d_list = {3};
  exp.samples = 5;
  const auto records = xstate_records(exp);
  REQUIRE(records.size() == 5);
  const DensityMatrix q = x_state_sample(3, derive_seed(exp.seed, 3), 4);
  const double full = hu_ye(eig_hermitian(q).spectrum, exp.r, exp.s);
  CHECK(records[4].hy_full == doctest::Approx(full).epsilon(1e-14));
}

TEST_CASE("Gaussian experiment rows") {
  GaussianExperiment exp;
  exp.r_grid = {0.0, 1.0, 25.0};
  const ExperimentReport report = run_gaussian_experiment(exp);
  REQUIRE(report.record_count() == 3);
  CHECK(cell(report, 0, "stable") == 0.0);
  CHECK(cell(report, 0, "schmidt") == 0.0);
  CHECK(cell(report, 1, "stable") == doctest::Approx(1.6198221).epsilon(1e-7));
  CHECK(std::abs(cell(report, 1, "schmidt") / cell(report, 1, "stable") - 1.0) < 1e-10);
  CHECK(std::isfinite(cell(report, 2, "stable")));
  CHECK(report.parameters["quadrature_profile"] == "calibrated, not from paper");
  // the naive column is reported as computed, with its rounding bound alongside
  CHECK(cell(report, 2, "naive_rounding_bound") > 1.0);

  GaussianExperiment user = exp;
  user.r_grid = {0.5};
  user.interval = std::make_pair(-1.0, 1.0);
  user.z = -40.0;
  const ExperimentReport flagged = run_gaussian_experiment(user);
  REQUIRE(flagged.record_count() == 1);
  CHECK(flagged.parameters["quadrature_profile"] == "user");
  CHECK(flagged.rows[0][column(flagged, "fredholm_flag")] != "");
}

TEST_CASE("zeta check") {
  const ZetaRecord big = zeta_record({2.0, 2.0, 100000});
  CHECK(big.det == doctest::Approx(15.0 / (M_PI * M_PI)).epsilon(1e-6));
  CHECK(big.abs_gap < 1e-5);
  CHECK(big.pass);
  const ZetaRecord four = zeta_record({4.0, 2.0, 10000});
  CHECK(four.analytic == doctest::Approx(105.0 / std::pow(M_PI, 4)).epsilon(1e-14));
  CHECK(four.abs_gap < 1e-8);
  const ZetaRecord one = zeta_record({2.0, 2.0, 1});
  CHECK(one.product == 1.25);
  CHECK(one.abs_gap == doctest::Approx(15.0 / (M_PI * M_PI) - 1.25).epsilon(1e-12));
  CHECK(one.pass);
  CHECK_THROWS_AS(zeta_record({1.0, 2.0, 10}), Error);
  CHECK(run_zeta_check({2.0, 2.0, 100}).record_count() == 1);
}

TEST_CASE("quadrature diagnostics") {
  const ExperimentReport constant = run_quad_test({"constant", -0.5, 0.0, 1.0, {5, 10, 20}});
  for (std::size_t i = 0; i < constant.record_count(); ++i) {
    CHECK(cell(constant, i, "det") == doctest::Approx(0.5).epsilon(1e-14));
  }
  const ExperimentReport rank_one = run_quad_test({"exp-rank-one", 1.0, 0.0, 1.0, {5, 10, 20}});
  CHECK(cell(rank_one, 2, "det") == doctest::Approx(1.0 + (std::exp(2.0) - 1.0) / 2.0).epsilon(1e-12));
  CHECK(cell(rank_one, 2, "det") == doctest::Approx(4.194528).epsilon(1e-6));
  CHECK(std::abs(cell(rank_one, 2, "diff_prev")) < std::abs(cell(rank_one, 1, "diff_prev")) + 1e-15);
  CHECK(rank_one.all_passed());
  const ExperimentReport zero = run_quad_test({"squeezed", 0.0, 0.0, 1.0, {5, 10}});
  CHECK(cell(zero, 0, "det") == 1.0);
  CHECK(cell(zero, 1, "det") == 1.0);
  try {
    run_quad_test({"gaussian-blob", 1.0, 0.0, 1.0, {5}});
    FAIL("expected DomainError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DomainError);
    CHECK(std::string(e.what()).find("exp-rank-one") != std::string::npos);
  }
  CHECK(exit_code_for(ErrorKind::DomainError) == kDomainError);
}

TEST_CASE("reports carry schema version and parameters") {
  const ExperimentReport report = run_zeta_check({2.0, 2.0, 10});
  const std::string csv = format_csv(report);
  CHECK(csv.find("# experiment: zeta") != std::string::npos);
  CHECK(csv.find("\"k\":10") != std::string::npos);
  const auto summary = summary_json(report);
  CHECK(summary["schema_version"] == kSchemaVersion);
  CHECK(summary["summary"]["records"] == 1);
  CHECK(summary["summary"]["all_passed"] == true);

  TempDir dir;
  std::ostringstream out, err;
  CHECK(emit_report(report, dir.path / "zeta.csv", out, err) == kOk);
  std::ifstream in(dir.path / "zeta.csv");
  std::stringstream written;
  written << in.rdbuf();
  CHECK(written.str() == csv);
  CHECK(nlohmann::json::parse(out.str())["experiment"] == "zeta");
}

TEST_CASE("number formatting round-trips") {
  qtest::Rng rng(60);
  for (int i = 0; i < 200; ++i) {
    const double v = rng.normal() * std::pow(10.0, rng.uniform(-300.0, 300.0));
    CHECK(std::stod(format_number(v)) == v);
  }
  CHECK(format_number(INFINITY) == "inf");
  CHECK(format_number(-INFINITY) == "-inf");
  CHECK(format_number(NAN) == "nan");
}

}  // TEST_SUITE
