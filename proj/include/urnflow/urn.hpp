#pragma once

#include <cstdint>
#include <vector>

#include "urnflow/eppf.hpp"
#include "urnflow/rng.hpp"

namespace urnflow {

// Sequential urn state.  Blocks are numbered in order of appearance;
// arrival[i] is the index (1-based) of the first element of i's block.
struct UrnState {
  int n = 0;
  std::vector<int> block_sizes;
  std::vector<int> assignment;   // element i -> block index (0-based)
  std::vector<int> arrival;      // element i -> arrival time (1-based)
  std::vector<int> block_first;  // block -> its first element (1-based)

  int blocks() const { return int(block_sizes.size()); }
  void check() const;  // asserts the structural invariants
};

// Advances the urn by one element; returns the chosen block index (0-based;
// == old block count when a new block was opened).
int urn_step(const PartitionModel& model, UrnState& state, Rng& rng);

UrnState sample_partition(const PartitionModel& model, int n, Rng& rng);

// Stick-breaking frequencies P_j = V_j prod_{i<j}(1-V_i) together with the
// unbroken remainder of the stick.
struct FrequencySequence {
  std::vector<double> weights;
  double residual = 1.0;
};

double stick_draw(const PartitionModel& model, int j, Rng& rng);  // V_j
FrequencySequence stick_frequencies(const PartitionModel& model, int m, Rng& rng);

// One draw of the mass a fixed atom of height q receives under the model's
// directing measure.  Exact beta draw for the one-parameter urn; otherwise
// the stick series is extended until the unbroken remainder drops below
// tol, so the result is within tol of an exact draw, coupling-wise.
double sample_kernel(const PartitionModel& model, double q, double tol, Rng& rng);
// Same, but forced through the stick series for every model (cross-check path).
double sample_kernel_truncated(const PartitionModel& model, double q, double tol, Rng& rng);

inline constexpr long kDefaultMaxAttempts = 1000000;

// Draw from the tilted structural law  p^{k-1}(1-p)^{n-k} nu1_cont(dp),
// normalized, restricted to (0,1]: the conditional mass of an atom observed
// k times among n rows.  Closed beta forms for the urn models; rejection
// from the continuous part (envelope at p* = (k-1)/(n-1)) for generic beta
// parts; exact reweighting for grids.
double sample_posterior_atom_ordinary(const PartitionModel& model, int k, int n,
                                      Rng& rng, long max_attempts = kDefaultMaxAttempts);

// Conditional mass of a fixed atom of height q observed k times among n
// rows (0 <= k <= n): rejection against kernel draws with acceptance
// proportional to p^k (1-p)^{n-k}, envelope at p* = k/n.
double sample_posterior_atom_fixed(const PartitionModel& model, double q, int k,
                                   int n, double tol, Rng& rng,
                                   long max_attempts = kDefaultMaxAttempts);

}  // namespace urnflow
