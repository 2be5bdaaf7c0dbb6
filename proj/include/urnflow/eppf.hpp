#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "urnflow/rng.hpp"

namespace urnflow {

// Law of the limiting frequency of the first block: an atom of mass `dust`
// at zero plus a continuous part carrying mass 1-dust, given either as a
// beta law or as a finite grid of nodes on (0,1].  The grid is the measure
// itself, not a discretization of a density.
struct StructuralDistribution {
  double dust = 0.0;
  bool is_beta = true;
  double beta_a = 1.0;
  double beta_b = 1.0;
  std::vector<std::pair<double, double>> grid;  // (p in (0,1], weight)

  static StructuralDistribution beta(double a, double b, double dust = 0.0);
  static StructuralDistribution numeric_grid(std::vector<std::pair<double, double>> nodes,
                                             double dust = 0.0);

  // integral p^{k-1} (1-p)^{n-k} over [0,1]; the atom at zero contributes
  // only when k == 1.
  double moment(int n, int k) const;
  void validate() const;
};

enum class ModelKind { crp1, crp2, generic };

// One of: single-parameter urn (theta), two-parameter urn (theta, alpha with
// 0 <= alpha < 1, theta > -alpha), or a model known only through its
// structural distribution.  Generic models may carry a stick sampler (the
// law of the j-th stick variable V_j) when frequency simulation is wanted;
// nothing determines it from nu1 alone.
struct PartitionModel {
  ModelKind kind = ModelKind::crp1;
  double theta = 1.0;
  double alpha = 0.0;
  StructuralDistribution nu1;
  using StickSampler = std::function<double(Rng&, int)>;  // V_j, j >= 1
  StickSampler stick_sampler;

  static PartitionModel crp1(double theta);
  static PartitionModel crp2(double theta, double alpha);
  static PartitionModel generic(StructuralDistribution nu1);

  bool has_eppf() const { return kind != ModelKind::generic; }
  bool has_sticks() const;
  // The structural distribution: Beta(1,theta) / Beta(1-alpha,theta+alpha)
  // for the urn models, nu1 itself otherwise.
  StructuralDistribution structural() const;
};

// Ordered block sizes (n_1,...,n_k), all positive.
struct Composition {
  std::vector<int> counts;
  int n() const;
  int k() const { return int(counts.size()); }
  void validate() const;
};

struct PredictiveWeights {
  std::vector<double> existing;  // one per block
  double fresh = 1.0;            // probability of opening a new block
};

// pi(n_1,...,n_k): probability that the exchangeable partition restricted
// to [n] has these block counts in order of appearance.
double eppf_eval(const PartitionModel& model, const Composition& c);
double eppf_log(const PartitionModel& model, const Composition& c);

// Conditional law of the next element given block counts (empty allowed).
PredictiveWeights predictive_weights(const PartitionModel& model,
                                     const std::vector<int>& counts);

// f(n,k) = integral of p^{k-1}(1-p)^{n-k} against the structural
// distribution; probability that a block pattern of k presences among n
// rows persists.  Closed gamma-ratio forms for the urn models, quadrature
// over the grid otherwise.
double f_nk(const PartitionModel& model, int n, int k);
double log_f_nk(const PartitionModel& model, int n, int k);

// Probability that the n-th element opens a new block; equals f(n,1).
double new_token_rate(const PartitionModel& model, int n);

// f(n+1,k+1)/f(n,k): probability an atom seen k times among n rows appears
// in row n+1.  (k-alpha)/(theta+n) for the urn models.
double persistence_prob(const PartitionModel& model, int n, int k);

// Brute-force oracle: every set partition of [n] (n <= 8) with its exact
// probability.  Partitions are reported as block assignments in order of
// appearance (element i belongs to block assignment[i]).
struct PartitionOutcome {
  std::vector<int> assignment;
  double probability;
};
std::vector<PartitionOutcome> enumerate_partition_probabilities(
    const PartitionModel& model, int n);

}  // namespace urnflow
