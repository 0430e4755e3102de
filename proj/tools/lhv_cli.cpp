// Command-line front end for the local-hidden-variable verification toolkit.
//
// Exit codes: 0 success, 1 verification verdict mismatch, 2 usage/parse error,
// 3 input-validation error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lhv/checks.hpp"
#include "lhv/curve.hpp"
#include "lhv/matrix_io.hpp"
#include "lhv/models.hpp"
#include "lhv/report_io.hpp"
#include "lhv/rng.hpp"
#include "lhv/theorem.hpp"

namespace {

using namespace lhv;

constexpr int kExitOk = 0;
constexpr int kExitVerdictMismatch = 1;
constexpr int kExitUsage = 2;
constexpr int kExitValidation = 3;

struct Options {
  int dim = 2;
  int n = 16;
  std::vector<int> scan_ns = {1, 2, 4, 8, 16, 32, 64};
  std::uint64_t seed = 1;
  std::int64_t n_tau = 10000;
  std::int64_t n_mu = 1000;
  std::string model = "qm-faithful";
  std::string input;
  std::string output;
  std::string format = "human";
  int workers = default_workers();
};

void emit(const Options& opts, const std::string& text) {
  if (opts.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opts.output, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file " + opts.output);
  out << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open input file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Alice-side setting: a matrix file when given, otherwise a seeded random
/// operator with spectrum {+1, 0.., -1}.
CoefficientVector load_setting(const Options& opts, const OperatorBasis& basis,
                               bool require_omega) {
  if (!opts.input.empty()) {
    const HermitianOperator op = parse_matrix_json(read_file(opts.input));
    if (op.dim() != basis.dim())
      throw ValidationError("input matrix dim " + std::to_string(op.dim()) +
                            " does not match --dim " + std::to_string(basis.dim()));
    if (require_omega && !classify_spectrum(op))
      throw ValidationError("input operator does not have spectrum {+1, 0.., -1}");
    return vectorize(op, basis);
  }
  Rng rng(derive_seed(opts.seed, 0xA11CE));
  return vectorize(random_omega_operator(basis.dim(), rng), basis);
}

int run_identities(const Options& opts) {
  const auto results = identity_checks(opts.dim, opts.seed);
  std::string text;
  bool all_ok = true;
  for (const auto& r : results) {
    text += std::string(r.ok ? "PASS" : "FAIL") + "  " + r.name + "  residual " +
            format_float(r.residual) + "  tolerance " + format_float(r.tolerance) +
            "\n";
    all_ok = all_ok && r.ok;
  }
  emit(opts, text);
  return all_ok ? kExitOk : kExitVerdictMismatch;
}

int run_decompose(const Options& opts) {
  if (opts.input.empty()) {
    std::cerr << "decompose: --input is required\n";
    return kExitUsage;
  }
  const HermitianOperator op = parse_matrix_json(read_file(opts.input));
  const auto dec = cartan_decompose(op);
  const auto report = verify_decomposition(dec, op);
  if (!report.ok()) {
    std::cerr << "decompose: self-verification failed (residual "
              << format_float(report.reconstruct_residual) << ")\n";
    return kExitVerdictMismatch;
  }
  emit(opts, opts.format == "json" ? decomposition_json(dec) : decomposition_text(dec));
  return kExitOk;
}

int run_curve(const Options& opts) {
  const auto basis = build_basis(SchmidtBasis::standard(opts.dim), Side::Alice);
  const auto a = load_setting(opts, basis, /*require_omega=*/true);
  const auto spec = make_curve_spec(a, pauli_frame(devectorize(a, basis)));
  const auto points = partition(spec, basis, opts.n);
  const auto spacing = verify_partition_spacing(points, std::numbers::pi);
  if (!spacing.uniform_ok) {
    std::cerr << "curve: partition spacing check failed, deviation "
              << format_float(spacing.max_deviation) << "\n";
    return kExitVerdictMismatch;
  }
  if (opts.format == "csv") {
    emit(opts, partition_csv(points));
  } else {
    std::string text = partition_csv(points);
    for (auto& c : text)
      if (c == ',') c = ' ';
    emit(opts, text);
  }
  return kExitOk;
}

int run_theorem(const Options& opts) {
  if (opts.model != "qm-faithful" && opts.model != "leggett") {
    std::cerr << "theorem: unknown model '" << opts.model
              << "' (registry: qm-faithful, leggett)\n";
    return kExitUsage;
  }
  if (opts.model == "leggett" && opts.dim != 2) {
    std::cerr << "theorem: the leggett model is defined for --dim 2 only\n";
    return kExitUsage;
  }

  const MaxEntangledState state(SchmidtBasis::standard(opts.dim));
  const auto basis = build_basis(state.schmidt(), Side::Alice);
  const auto a = load_setting(opts, basis, /*require_omega=*/true);

  TheoremReport report;
  bool expected_violated = false;
  if (opts.model == "qm-faithful") {
    const QmFaithfulModel model(state);
    report = verify_theorem(model, state, a, opts.n, opts.n_tau, opts.n_mu, opts.seed,
                            opts.workers);
    expected_violated = false;
  } else {
    const LeggettModel model(state);
    report = verify_theorem(model, state, a, opts.n, opts.n_tau, opts.n_mu, opts.seed,
                            opts.workers);
    // The model's integrated |f| is 1/2 for every unit setting direction.
    expected_violated = final_bound(opts.n, a.squared_norm(), opts.dim) < 0.5;
  }

  emit(opts, opts.format == "csv" ? theorem_report_csv(report)
                                  : theorem_report_text(report));
  return report.violated == expected_violated ? kExitOk : kExitVerdictMismatch;
}

int run_leggett_scan(const Options& opts) {
  if (opts.dim != 2) {
    std::cerr << "leggett-scan: requires --dim 2\n";
    return kExitUsage;
  }
  const MaxEntangledState state(SchmidtBasis::standard(2));
  const LeggettModel model(state);
  const auto basis = build_basis(state.schmidt(), Side::Alice);
  const auto a = load_setting(opts, basis, /*require_omega=*/true);

  std::vector<ScanRow> rows;
  rows.reserve(opts.scan_ns.size());
  for (std::size_t i = 0; i < opts.scan_ns.size(); ++i) {
    const int n = opts.scan_ns[i];
    if (n < 1) {
      std::cerr << "leggett-scan: n values must be >= 1\n";
      return kExitUsage;
    }
    const auto report = verify_theorem(model, state, a, n, opts.n_tau, opts.n_mu,
                                       derive_seed(opts.seed, i), opts.workers);
    rows.push_back({n, report.final_lhs, report.final_rhs, report.final_verdict,
                    report.violated});
  }
  emit(opts, opts.format == "csv" ? scan_csv(rows) : scan_text(rows));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  Options opts;
  CLI::App app{"Numerical verification of local parts of hidden-variable models\n"
               "on maximally entangled states."};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* cmd, std::vector<std::string> formats) {
    cmd->add_option("--dim", opts.dim, "Local Hilbert-space dimension N (>= 2)");
    cmd->add_option("--seed", opts.seed, "64-bit master seed");
    cmd->add_option("--output", opts.output, "Output path (default: stdout)");
    cmd->add_option("--format", opts.format, "Output format")
        ->check(CLI::IsMember(std::move(formats)));
  };

  auto* identities =
      app.add_subcommand("identities", "Run the operator/state identity suite");
  add_common(identities, {"human"});

  auto* decompose =
      app.add_subcommand("decompose", "Cartan-decompose a Hermitian matrix file");
  add_common(decompose, {"human", "json"});
  decompose->add_option("--input", opts.input, "Matrix document to decompose");

  auto* curve = app.add_subcommand("curve", "Emit the uniform partition of the curve");
  add_common(curve, {"human", "csv"});
  curve->add_option("--input", opts.input, "Unit-spectrum matrix document");
  curve->add_option("--n", opts.n, "Partition count");

  auto* theorem =
      app.add_subcommand("theorem", "Run the chained-inequality verification");
  add_common(theorem, {"human", "csv"});
  theorem->add_option("--input", opts.input, "Unit-spectrum matrix document");
  theorem->add_option("--n", opts.n, "Partition count");
  theorem->add_option("--model", opts.model, "Model registry name");
  theorem->add_option("--samples-tau", opts.n_tau, "Outer tau sample count");
  theorem->add_option("--samples-mu", opts.n_mu, "Inner mu sample count");
  theorem->add_option("--workers", opts.workers, "Worker thread count");

  auto* scan = app.add_subcommand(
      "leggett-scan", "Scan partition counts for the minimal exclusion of the model");
  add_common(scan, {"human", "csv"});
  scan->add_option("--n", opts.scan_ns, "Partition counts to scan")->delimiter(',');
  scan->add_option("--samples-tau", opts.n_tau, "Outer tau sample count");
  scan->add_option("--workers", opts.workers, "Worker thread count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (opts.dim < 2) {
      std::cerr << "usage error: --dim must be >= 2\n";
      return kExitUsage;
    }
    if (opts.workers < 1) {
      std::cerr << "usage error: --workers must be >= 1\n";
      return kExitUsage;
    }
    // Validate paths before any computation starts.
    if (!opts.output.empty()) {
      std::ofstream probe(opts.output, std::ios::binary | std::ios::app);
      if (!probe) {
        std::cerr << "usage error: cannot open output path " << opts.output << "\n";
        return kExitUsage;
      }
    }
    if (identities->parsed()) return run_identities(opts);
    if (decompose->parsed()) return run_decompose(opts);
    if (curve->parsed()) return run_curve(opts);
    if (theorem->parsed()) return run_theorem(opts);
    if (scan->parsed()) return run_leggett_scan(opts);
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}
