// Command-line front end: sample the urn-scheme processes, score feature
// allocations, compute truncation bounds, and run the verification suites.
//
// Exit codes: 0 success, 1 verification reports failed, 2 usage or
// validation error, 3 sampling failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "urnflow/alloc.hpp"
#include "urnflow/cou.hpp"
#include "urnflow/errors.hpp"
#include "urnflow/json_io.hpp"
#include "urnflow/verify.hpp"

namespace {

using urnflow::json;

int log_level() {
  const char* env = std::getenv("URNFLOW_LOG");
  if (!env) return 0;
  std::string v = env;
  if (v == "debug") return 2;
  if (v == "info") return 1;
  return 0;
}

void log_info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "urnflow: " << msg << "\n";
}

// Inline JSON, or @path to read a file.
json load_json_arg(const std::string& arg) {
  if (!arg.empty() && arg[0] == '@') {
    std::ifstream in(arg.substr(1));
    if (!in) throw std::invalid_argument("cannot open file: " + arg.substr(1));
    return json::parse(in);
  }
  return json::parse(arg);
}

struct Output {
  std::ofstream file;
  std::ostream* os = &std::cout;
  void open(const std::string& path) {
    if (path.empty()) return;
    file.open(path);
    if (!file) throw std::invalid_argument("cannot open output file: " + path);
    os = &file;
  }
};

struct SampleArgs {
  std::string mode;
  std::string model_arg;
  std::string atoms_arg;
  std::string base_arg;
  std::string obs_arg;
  std::string out_path;
  std::string format = "json";
  double gamma = 0.0;
  double tol = 1e-8;
  int n = 1;
  int rounds = 8;
  long samples = 1;
  std::uint64_t seed = 0;
};

urnflow::HazardMeasureSpec spec_from_args(const SampleArgs& a) {
  urnflow::HazardMeasureSpec spec;
  spec.gamma = a.gamma;
  if (!a.base_arg.empty() && a.base_arg != "uniform") {
    json grid = load_json_arg(a.base_arg);
    std::vector<std::pair<double, double>> nodes;
    for (const auto& node : grid)
      nodes.emplace_back(node[0].get<double>(), node[1].get<double>());
    spec.base = urnflow::BaseDistribution::grid(nodes);
  }
  if (!a.atoms_arg.empty()) {
    json atoms = load_json_arg(a.atoms_arg);
    for (const auto& at : atoms)
      spec.fixed_atoms.push_back({at[0].get<double>(), at[1].get<double>()});
  }
  spec.validate();
  return spec;
}

urnflow::FeatureAllocation allocation_from_arg(const std::string& arg) {
  json j = load_json_arg(arg);
  if (j.is_array())  // a sampled sequence; extract its combinatorial structure
    return urnflow::extract_allocation(urnflow::sequence_from_json(j));
  return urnflow::allocation_from_json(j);
}

int cmd_sample(const SampleArgs& a) {
  if (a.format != "json")
    throw std::invalid_argument("sample emits json only; csv applies to verify reports");
  urnflow::PartitionModel model = urnflow::model_from_json(load_json_arg(a.model_arg));
  urnflow::HazardMeasureSpec spec = spec_from_args(a);
  Output out;
  out.open(a.out_path);
  log_info("sampling mode=" + a.mode + " samples=" + std::to_string(a.samples));

  std::optional<urnflow::FeatureAllocation> obs;
  if (a.mode == "posterior") {
    if (a.obs_arg.empty())
      throw std::invalid_argument("posterior mode needs --obs (allocation or sequence json)");
    obs = allocation_from_arg(a.obs_arg);
  }

  for (long s = 0; s < a.samples; ++s) {
    urnflow::Rng rng = urnflow::derive_rng(a.seed, s);
    json line;
    if (a.mode == "cou-direct") {
      line = urnflow::sequence_to_json(urnflow::cou_direct(spec, model, a.n, rng));
    } else if (a.mode == "cou-seq") {
      line = urnflow::sequence_to_json(urnflow::cou_sequential(spec, model, a.n, rng));
    } else if (a.mode == "gbp-round") {
      line = urnflow::hazard_realization_to_json(
          urnflow::gbp_stick_by_round(spec, model, a.rounds, rng));
    } else if (a.mode == "gbp-block") {
      line = urnflow::hazard_realization_to_json(
          urnflow::gbp_stick_by_block(spec, model, a.rounds, rng));
    } else if (a.mode == "posterior") {
      line = urnflow::hazard_realization_to_json(
          urnflow::posterior_sample(spec, model, *obs, a.rounds, rng));
    } else {
      throw std::invalid_argument("unknown mode: " + a.mode);
    }
    *out.os << line.dump() << "\n";
  }
  return 0;
}

struct PmfArgs {
  std::string model_arg;
  std::string alloc_arg;
  std::string next_arg;
  std::string matrix_arg;
  std::string out_path;
  double gamma = 1.0;
  bool efpf = false;
  int n = 0;
};

int cmd_pmf(const PmfArgs& a) {
  urnflow::PartitionModel model = urnflow::model_from_json(load_json_arg(a.model_arg));
  Output out;
  out.open(a.out_path);
  json result;

  if (a.efpf) {
    if (a.matrix_arg.empty()) throw std::invalid_argument("--efpf needs --matrix");
    urnflow::LabeledMatrix m = urnflow::matrix_from_json(load_json_arg(a.matrix_arg));
    if (m.n == 0) m.n = a.n;
    if (m.n == 0)
      throw std::invalid_argument("empty matrix: pass --n for the row count");
    std::vector<int> sums;
    for (urnflow::History col : m.columns) sums.push_back(urnflow::history_size(col));
    result["efpf_log"] = urnflow::efpf_log(model, a.gamma, m.n, sums);
    result["columns"] = sums.size();
  } else if (!a.next_arg.empty()) {
    urnflow::FeatureAllocation at_n = allocation_from_arg(a.alloc_arg);
    urnflow::FeatureAllocation at_n1 = allocation_from_arg(a.next_arg);
    result["step_log_pmf"] = urnflow::step_log_pmf(model, a.gamma, at_n, at_n1);
  } else {
    urnflow::FeatureAllocation alloc = allocation_from_arg(a.alloc_arg);
    double rate_sum = 0.0;
    for (int j = 1; j <= alloc.n; ++j) rate_sum += urnflow::f_nk(model, j, 1);
    double gamma_count = 0.0, f_sum = 0.0, log_fact = 0.0;
    for (auto [h, m] : alloc.counts) {
      gamma_count += m * std::log(a.gamma);
      f_sum += m * urnflow::log_f_nk(model, alloc.n, urnflow::history_size(h));
      log_fact -= std::lgamma(double(m) + 1.0);
    }
    result["log_pmf"] = urnflow::allocation_log_pmf(model, a.gamma, alloc);
    result["terms"] = {{"gamma_count", gamma_count},
                       {"rate_sum", -a.gamma * rate_sum},
                       {"f_sum", f_sum},
                       {"log_factorials", log_fact}};
  }
  *out.os << result.dump() << "\n";
  return 0;
}

struct VerifyArgs {
  std::string suite = "all";
  std::string budget = "normal";
  std::string out_path;
  std::string format = "json";
  std::uint64_t seed = 0;
};

int cmd_verify(const VerifyArgs& a) {
  auto reports = urnflow::run_suite(a.suite, a.seed, urnflow::budget_from_string(a.budget));
  Output out;
  out.open(a.out_path);
  long failed = 0;
  if (a.format == "csv") {
    *out.os << urnflow::reports_to_csv(reports);
    for (const auto& r : reports)
      if (!r.pass) ++failed;
  } else {
    for (const auto& r : reports) {
      *out.os << urnflow::report_to_json_line(r) << "\n";
      if (!r.pass) ++failed;
    }
  }
  log_info("suite " + a.suite + ": " + std::to_string(reports.size()) + " reports, " +
           std::to_string(failed) + " failed");
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulation and verification of urn-driven Bernoulli process sequences"};
  app.require_subcommand(1);

  SampleArgs sa;
  CLI::App* sample = app.add_subcommand("sample", "draw process realizations");
  sample->add_option("--mode", sa.mode,
                     "cou-direct | cou-seq | gbp-round | gbp-block | posterior")
      ->required();
  sample->add_option("--model", sa.model_arg, "partition model json (or @file)")->required();
  sample->add_option("--gamma", sa.gamma, "nonatomic mass of the driving measure");
  sample->add_option("--atoms", sa.atoms_arg, "fixed atoms json [[loc,mass],...]");
  sample->add_option("--base", sa.base_arg, "base law: uniform (default) or grid json");
  sample->add_option("--n", sa.n, "rows per sequence");
  sample->add_option("--samples", sa.samples, "number of independent draws");
  sample->add_option("--rounds", sa.rounds, "construction depth for gbp/posterior modes");
  sample->add_option("--seed", sa.seed, "rng seed (required; runs are reproducible)")
      ->required();
  sample->add_option("--tol", sa.tol, "kernel truncation tolerance");
  sample->add_option("--obs", sa.obs_arg, "observed allocation or sequence (posterior)");
  sample->add_option("--out", sa.out_path, "output path (default stdout)");
  sample->add_option("--format", sa.format, "json");

  PmfArgs pa;
  CLI::App* pmf = app.add_subcommand("pmf", "score feature allocations");
  pmf->add_option("--model", pa.model_arg, "partition model json (or @file)")->required();
  pmf->add_option("--gamma", pa.gamma, "nonatomic mass of the driving measure");
  pmf->add_option("--alloc", pa.alloc_arg, "allocation json, or a sampled sequence");
  pmf->add_option("--next", pa.next_arg, "allocation at n+1 rows (conditional step score)");
  pmf->add_flag("--efpf", pa.efpf, "score a labeled matrix instead");
  pmf->add_option("--matrix", pa.matrix_arg, "column bitstrings json, e.g. [\"110\",\"011\"]");
  pmf->add_option("--n", pa.n, "row count for an empty matrix");
  pmf->add_option("--out", pa.out_path, "output path (default stdout)");

  VerifyArgs va;
  CLI::App* verify = app.add_subcommand("verify", "run verification suites");
  verify->add_option("--suite", va.suite, "suite name or 'all'");
  verify->add_option("--seed", va.seed, "rng seed (required; reports are reproducible)")
      ->required();
  verify->add_option("--budget", va.budget, "small | normal | large");
  verify->add_option("--out", va.out_path, "output path (default stdout)");
  verify->add_option("--format", va.format, "json | csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sample->parsed()) return cmd_sample(sa);
    if (pmf->parsed()) return cmd_pmf(pa);
    if (verify->parsed()) return cmd_verify(va);
  } catch (const urnflow::sampling_error& e) {
    std::cerr << "sampling failure: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const urnflow::unsupported_operation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "json error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
