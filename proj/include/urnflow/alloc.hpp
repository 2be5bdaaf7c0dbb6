#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "urnflow/eppf.hpp"
#include "urnflow/measures.hpp"
#include "urnflow/rng.hpp"

namespace urnflow {

// Presence history across n rows packed into a word: bit r-1 set means the
// atom appears in row r.  Row count is capped at 63 by the packing.
using History = std::uint64_t;

inline int history_size(History h) { return __builtin_popcountll(h); }

struct AllocationAtom {
  std::uint64_t id = 0;
  double location = 0.0;
  History history = 0;
};

// Location-free combinatorial structure of n rows: the multiplicity of each
// nonzero presence history.  Atom records are optional and carried only
// when the allocation was extracted from realizations.
struct FeatureAllocation {
  int n = 0;
  std::map<History, long> counts;
  std::vector<AllocationAtom> atoms;
  bool has_atoms = false;

  long total_atoms() const;
  void validate() const;
  // canonical text form "h:m,h:m,..." with bitstring histories, used as a
  // map key when estimating allocation distributions
  std::string key() const;
};

FeatureAllocation extract_allocation(const std::vector<BernoulliRealization>& rows);

// Drops the last row, merging M_{h0} + M_{h1} into M_h.
FeatureAllocation restrict_allocation(const FeatureAllocation& a);

// Binary matrix view of an allocation with a declared column order.
struct LabeledMatrix {
  enum class Order { left_ordered, uniform_random };
  int n = 0;
  std::vector<History> columns;
  Order order = Order::left_ordered;
};

// Canonical column order: at the first row where two histories differ, the
// one containing the row precedes.
bool history_precedes(History g, History h);
LabeledMatrix left_ordered(const FeatureAllocation& a);
LabeledMatrix uniform_labeling(const FeatureAllocation& a, Rng& rng);

// log Pr{allocation} for a nonatomic driving measure of total mass gamma.
double allocation_log_pmf(const PartitionModel& model, double gamma,
                          const FeatureAllocation& a);

// log Pr{allocation at n+1 rows | its restriction to n rows}.
double step_log_pmf(const PartitionModel& model, double gamma,
                    const FeatureAllocation& at_n, const FeatureAllocation& at_n1);

// log probability of a uniformly labeled matrix with the given column sums.
double efpf_log(const PartitionModel& model, double gamma, int n,
                const std::vector<int>& column_sums);

// All allocations on n rows with at most max_atoms atoms (oracle support).
std::vector<FeatureAllocation> enumerate_allocations(int n, long max_atoms);

}  // namespace urnflow
