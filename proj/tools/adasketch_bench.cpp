// adasketch-bench: suite runner, sensitivity sweep, performance profiles and
// error traces.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "adasketch/bench.hpp"
#include "adasketch/errors.hpp"

namespace {

using namespace adasketch;
using namespace adasketch::bench;

struct Options {
  std::string input;
  std::string out;
  std::string format = "csv";
  std::string seed_list;
  std::optional<double> kkt_tol;
  std::optional<std::size_t> max_outer;
  bool wall_time = false;
  std::string summary;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  if (!out) throw Error("write failed for '" + path + "'");
}

Manifest manifest_from(const Options& opt) {
  Manifest m = load_manifest(opt.input);
  if (!opt.seed_list.empty()) m.seeds = parse_seed_list(opt.seed_list);
  if (opt.kkt_tol) m.kkt_tol = *opt.kkt_tol;
  if (opt.max_outer) m.max_outer = *opt.max_outer;
  return m;
}

void report_failures(const std::vector<RunRecord>& records) {
  std::size_t failed = 0;
  for (const auto& r : records) failed += r.converged() ? 0 : 1;
  if (failed) std::cerr << fmt::format("{} of {} runs did not converge\n", failed, records.size());
}

int cmd_run(const Options& opt) {
  const auto records = run_suite(manifest_from(opt));
  write_output(opt.out, emit_records(records, format_from_string(opt.format), opt.wall_time));
  report_failures(records);
  return 0;
}

int cmd_sweep(const Options& opt) {
  const auto records = sensitivity_sweep(manifest_from(opt));
  const Format format = format_from_string(opt.format);
  write_output(opt.out, emit_records(records, format, opt.wall_time));
  if (!opt.summary.empty()) write_output(opt.summary, emit_summary(summarize_groups(records), format));
  report_failures(records);
  return 0;
}

int cmd_profile(const Options& opt) {
  const auto result = performance_profile(parse_records(read_file(opt.input)));
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
  write_output(opt.out, emit_profile(result.curves, format_from_string(opt.format)));
  return 0;
}

int cmd_trace(const Options& opt) {
  const auto records = parse_records(read_file(opt.input));
  bool any = false;
  for (const auto& r : records) any = any || !r.trajectory.empty();
  if (!any && !records.empty())
    std::cerr << "warning: no trajectories in input (run with \"trajectories\": true and --format json)\n";
  write_output(opt.out, emit_trace(records, format_from_string(opt.format)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AdaSketch-Newton benchmark driver"};
  app.require_subcommand(1);
  Options opt;

  const auto add_output = [&](CLI::App* sub) {
    sub->add_option("--out,-o", opt.out, "Output file (default stdout)");
    sub->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  };
  const auto add_suite = [&](CLI::App* sub) {
    sub->add_option("manifest", opt.input, "JSON manifest")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed-list", opt.seed_list, "Seeds, e.g. 0-9 or 0,3,7 (overrides the manifest)");
    sub->add_option("--kkt-tol", opt.kkt_tol, "KKT tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--max-outer", opt.max_outer, "Outer iteration limit")->check(CLI::PositiveNumber);
    sub->add_flag("--wall-time", opt.wall_time, "Include wall time in CSV output");
    add_output(sub);
  };

  auto* run = app.add_subcommand("run", "Run every problem x method x seed cell");
  add_suite(run);
  auto* sweep = app.add_subcommand("sweep", "Parameter sensitivity sweep");
  add_suite(sweep);
  sweep->add_option("--summary", opt.summary, "Also write per-configuration five-number summaries");
  auto* profile = app.add_subcommand("profile", "Performance profile on flops from run records");
  profile->add_option("records", opt.input, "Records (CSV or JSON)")->required()->check(CLI::ExistingFile);
  add_output(profile);
  auto* trace = app.add_subcommand("trace", "Flatten KKT / log-error trajectories from JSON records");
  trace->add_option("records", opt.input, "Records (JSON)")->required()->check(CLI::ExistingFile);
  add_output(trace);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(opt);
    if (*sweep) return cmd_sweep(opt);
    if (*profile) return cmd_profile(opt);
    return cmd_trace(opt);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return 1;
}
