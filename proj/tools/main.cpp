#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

// Malformed flags map onto the stable exit-code contract as domain errors.
int cli11_exit(const CLI::App& app, const CLI::Error& e) {
  if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) return app.exit(e);
  std::cerr << "DomainError: " << e.what() << '\n';
  return qent::cli::kDomainError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qent: quantum entropies via spectral and Fredholm determinant routes"};
  app.require_subcommand(1);

  std::optional<std::string> out_path;
  const auto add_out = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_path, "Write CSV here; the JSON summary then goes to stdout");
  };

  // entropy
  qent::cli::EntropyCommand ent;
  std::string base = "e";
  std::optional<int> alpha;
  auto* entropy = app.add_subcommand("entropy", "Entropy of a density matrix file (JSON result)");
  entropy->add_option("input", ent.input, "Matrix file {dim, re, im}")->required();
  entropy->add_option("--kind", ent.kind, "vn, vn-ren, tsallis, renyi, hy, hy-fredholm, hy-ren")->required();
  entropy->add_option("--r", ent.params.r, "Order r")->capture_default_str();
  entropy->add_option("--s", ent.params.s, "Hu-Ye exponent s")->capture_default_str();
  entropy->add_option("--alpha", alpha, "Carleman order (default: smallest alpha with alpha r >= 1)");
  entropy->add_option("--base", base, "Logarithm base for vn and renyi")->check(CLI::IsMember({"e", "2"}));

  // xstate
  qent::cli::XStateExperiment xs;
  auto* xstate = app.add_subcommand("xstate", "Triangle inequality on random X-states (CSV)");
  xstate->add_option("--d", xs.d_list, "Local dimensions, each in 2..8")->capture_default_str();
  xstate->add_option("--samples", xs.samples, "Samples per dimension")->capture_default_str();
  xstate->add_option("--r", xs.r)->capture_default_str();
  xstate->add_option("--s", xs.s)->capture_default_str();
  xstate->add_option("--seed", xs.seed)->capture_default_str();
  add_out(xstate);

  // gaussian
  qent::cli::GaussianExperiment ga;
  std::vector<double> interval;
  std::optional<std::size_t> nmax;
  auto* gaussian = app.add_subcommand("gaussian", "Two-mode squeezed state entropy sweep (CSV)");
  gaussian->add_option("--r", ga.r_grid, "Squeezing values")->required();
  gaussian->add_option("--nmax", nmax, "Schmidt truncation (default: per-row, tail < 1e-14)");
  gaussian->add_option("--m", ga.m, "Gauss-Legendre nodes")->capture_default_str();
  gaussian->add_option("--z", ga.z, "Coupling constant")->capture_default_str();
  gaussian->add_option("--interval", interval, "Quadrature interval a b (default: [0, r])")->expected(2);
  add_out(gaussian);

  // zeta
  qent::cli::ZetaCheck zc;
  auto* zeta = app.add_subcommand("zeta", "det_r of the prime spectrum against zeta(q)/zeta(2q) (CSV)");
  zeta->add_option("--q", zc.q)->capture_default_str();
  zeta->add_option("--r", zc.r)->capture_default_str();
  zeta->add_option("--k", zc.k, "Number of primes")->capture_default_str();
  add_out(zeta);

  // quad
  qent::cli::QuadTest qt;
  auto* quad = app.add_subcommand("quad", "Nystrom determinant convergence table (CSV)");
  quad->add_option("--kernel", qt.kernel, "constant, exp-rank-one, squeezed")->capture_default_str();
  quad->add_option("--z", qt.z)->capture_default_str();
  quad->add_option("--interval", interval, "Interval a b (default: 0 1)")->expected(2);
  quad->add_option("--m", qt.m_list, "Node counts")->capture_default_str();
  add_out(quad);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Error& e) {
    return cli11_exit(app, e);
  }

  const std::optional<std::filesystem::path> out =
      out_path ? std::optional<std::filesystem::path>(*out_path) : std::nullopt;
  const unsigned threads = qent::cli::thread_count();

  try {
    if (entropy->parsed()) {
      ent.params.alpha = alpha;
      ent.params.log_base = base == "2" ? qent::LogBase::two : qent::LogBase::natural;
      return qent::cli::cmd_entropy(ent, std::cout, std::cerr);
    }
    if (xstate->parsed()) {
      xs.threads = threads;
      return qent::cli::emit_report(qent::cli::run_xstate_experiment(xs), out, std::cout, std::cerr);
    }
    if (gaussian->parsed()) {
      ga.threads = threads;
      ga.n_max = nmax;
      if (!interval.empty()) ga.interval = std::pair{interval[0], interval[1]};
      return qent::cli::emit_report(qent::cli::run_gaussian_experiment(ga), out, std::cout, std::cerr);
    }
    if (zeta->parsed()) {
      return qent::cli::emit_report(qent::cli::run_zeta_check(zc), out, std::cout, std::cerr);
    }
    if (quad->parsed()) {
      if (!interval.empty()) {
        qt.a = interval[0];
        qt.b = interval[1];
      }
      return qent::cli::emit_report(qent::cli::run_quad_test(qt), out, std::cout, std::cerr);
    }
  } catch (const qent::Error& e) {
    std::cerr << e.what() << '\n';
    return qent::cli::exit_code_for(e.kind());
  }
  return EXIT_FAILURE;
}
