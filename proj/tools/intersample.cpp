// Command-line front end: verify <spec.json> [options]

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "intersample/bnb.hpp"
#include "intersample/report_io.hpp"
#include "intersample/verifier.hpp"

namespace {

namespace fs = std::filesystem;
using namespace intersample;

constexpr int kExitError = 3;

struct Options {
  std::string spec_path;
  double epsilon = 1e-6;
  unsigned k = 10;
  unsigned l = 10;
  std::string overestimator = "pwq";
  std::optional<std::size_t> facet;
  std::string output;
  std::string csv;
  std::size_t samples = 200;
  bool trace = false;
  std::size_t jobs = 1;
};

fs::path csv_path_for(const fs::path& base, std::size_t query, std::size_t count) {
  if (count == 1) return base;
  fs::path out = base;
  out.replace_filename(base.stem().string() + "_" + std::to_string(query) + base.extension().string());
  return out;
}

void print_summary(const VerificationReport& report) {
  for (const QueryReport& q : report.queries) {
    std::printf("query %s: %s (x0 in X: %s, u0 in U: %s, successor in X: %s)\n", q.label.c_str(),
                std::string(to_string(q.verdict)).c_str(), q.membership.x0_in_x ? "yes" : "no",
                q.membership.u0_in_u ? "yes" : "no", q.membership.successor_in_x ? "yes" : "no");
    for (const FacetResult& f : q.facets) {
      if (f.f_upper) {
        std::printf("  facet %zu: %-12s f_upper=%.10g f_lower=%.10g gap=%.3g bisections=%zu convex_ops=%zu %s\n",
                    f.j, std::string(to_string(f.verdict)).c_str(), *f.f_upper, f.f_lower, *f.gap, f.bisections,
                    f.convex_ops, f.status.c_str());
      } else if (f.error) {
        std::printf("  facet %zu: error: %s\n", f.j, f.error->c_str());
      } else {
        std::printf("  facet %zu: %-12s h^T x0=%.10g (not solved)\n", f.j, std::string(to_string(f.verdict)).c_str(),
                    f.f_lower);
      }
    }
    for (const std::string& e : q.errors) std::printf("  error: %s\n", e.c_str());
  }
}

int run(const Options& opt) {
  const SpecDocument doc = load_spec(opt.spec_path);

  VerifyConfig cfg;
  cfg.solver.epsilon = opt.epsilon;
  cfg.solver.exp = ExpParams{opt.k, opt.l};
  const auto kind = parse_overestimator(opt.overestimator);
  if (!kind) throw ConfigInvalid("unknown overestimator '" + opt.overestimator + "'");
  cfg.solver.overestimator = *kind;
  cfg.facet = opt.facet;
  cfg.jobs = opt.jobs;

  std::vector<FacetTrace> traces;
  const VerificationReport report = verify_all(doc.system, doc.queries, cfg, opt.trace ? &traces : nullptr);

  if (opt.trace) {
    for (const FacetTrace& ft : traces) {
      for (const TraceEvent& e : ft.events) std::cout << trace_line(e, ft.query, ft.j) << '\n';
    }
  } else {
    print_summary(report);
  }

  if (!opt.output.empty()) {
    std::ofstream out(opt.output);
    if (!out) throw std::runtime_error("cannot write " + opt.output);
    out << serialize_report(report);
  }

  if (!opt.csv.empty()) {
    const std::size_t facet = opt.facet.value_or(0);
    for (std::size_t qi = 0; qi < doc.queries.size(); ++qi) {
      const fs::path path = csv_path_for(opt.csv, qi, doc.queries.size());
      std::ofstream out(path);
      if (!out) throw std::runtime_error("cannot write " + path.string());
      write_csv(out, sample_outputs(doc.system, doc.queries[qi], facet, opt.samples));
    }
  }

  return exit_code(report);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inter-sample constraint verification for sampled linear systems"};
  app.require_subcommand(1);
  Options opt;

  CLI::App* verify = app.add_subcommand("verify", "Check max_t h^T x(t) <= 1 for every row of X.H and every query");
  verify->add_option("spec", opt.spec_path, "System and query spec (JSON)")->required();
  verify->add_option("--epsilon", opt.epsilon, "Absolute optimality tolerance")->capture_default_str();
  verify->add_option("--k", opt.k, "Taylor order of the interval exponential")->capture_default_str();
  verify->add_option("--l", opt.l, "Scaling exponent of the interval exponential")->capture_default_str();
  verify->add_option("--overestimator", opt.overestimator, "pwa | pwq | concave")
      ->check(CLI::IsMember({"pwa", "pwq", "concave", "1", "2", "3"}))
      ->capture_default_str();
  verify->add_option("--facet", opt.facet, "Only check this row of X.H (0-based)");
  verify->add_option("--output", opt.output, "Write the JSON report here");
  verify->add_option("--csv", opt.csv, "Write sampled f(t) and x(t) here (one file per query)");
  verify->add_option("--samples", opt.samples, "Number of CSV samples")
      ->check(CLI::Range(std::size_t{2}, std::size_t{100000000}))
      ->capture_default_str();
  verify->add_flag("--trace", opt.trace, "Print one JSON line per processed node instead of the summary");
  verify->add_option("--jobs", opt.jobs, "Facet solves run in parallel")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1024}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    return run(opt);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  }
}
