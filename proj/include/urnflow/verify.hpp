#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "urnflow/eppf.hpp"

namespace urnflow {

// One verification outcome.  Statistic semantics depend on kind:
//   exact / tv / moment : pass when statistic <= threshold
//   ks / chi2           : statistic is a p-value, pass when it exceeds
//                          the significance threshold
struct TestReport {
  std::string name;
  std::string kind;  // exact | chi2 | ks | tv | moment
  double statistic = 0.0;
  double threshold = 0.0;
  bool pass = false;
  long samples = 0;
  std::uint64_t seed = 0;
};

enum class Budget { small, normal, large };
Budget budget_from_string(const std::string& s);

// Plug-in total variation between an empirical distribution and a reference
// (sub-)probability: half the summed absolute differences over the union of
// outcomes, plus half of any reference mass left off the map.  Empirical
// outcomes missing from the reference enter at their full empirical mass.
double tv_distance(const std::map<std::string, long>& empirical,
                   const std::map<std::string, double>& exact);

std::vector<std::string> suite_names();

// Runs one named suite (or "all").  Deterministic for a given seed: every
// check derives its own RNG stream from (seed, check name), and Monte Carlo
// replicas are distributed over fixed chunks with per-chunk streams, so the
// reports do not depend on scheduling.
std::vector<TestReport> run_suite(const std::string& suite, std::uint64_t seed,
                                  Budget budget = Budget::normal);

struct ContinuumPoint {
  int m = 0;        // number of equal atoms in the discretized measure
  double tv = 0.0;  // distance between discrete and continuum allocations
};

// For each m, builds the purely-atomic measure with m atoms of mass gamma/m
// at equally spaced locations, samples n rows through the direct scheme, and
// reports the allocation distance to the continuum sampler.
std::vector<ContinuumPoint> continuum_limit_experiment(const PartitionModel& model,
                                                       double gamma, int n,
                                                       const std::vector<int>& atom_counts,
                                                       long samples, std::uint64_t seed);

// Module invariants and the suite that exercises each; a test asserts the
// mapping stays total.
struct InvariantCoverage {
  std::string invariant;
  std::string suite;
};
const std::vector<InvariantCoverage>& invariant_manifest();

std::string report_to_json_line(const TestReport& r);
std::string reports_to_csv(const std::vector<TestReport>& rs);

}  // namespace urnflow
