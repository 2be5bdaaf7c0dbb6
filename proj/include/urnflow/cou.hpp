#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "urnflow/alloc.hpp"
#include "urnflow/eppf.hpp"
#include "urnflow/measures.hpp"
#include "urnflow/rng.hpp"
#include "urnflow/urn.hpp"

namespace urnflow {

// Tag recording which part of a construction produced an atom.
struct OriginTag {
  enum class Kind { round, block, fixed } kind = Kind::fixed;
  int index = 0;  // round or block number, 1-based

  static OriginTag round(int m) { return {Kind::round, m}; }
  static OriginTag block(int t) { return {Kind::block, t}; }
  static OriginTag fixed() { return {Kind::fixed, 0}; }
  std::string str() const;
};

struct WeightedAtom {
  std::uint64_t id = 0;
  double location = 0.0;
  double weight = 0.0;  // in (0,1]
  OriginTag tag;
};

// A sampled directing measure: weighted atoms plus the nonrandom nonatomic
// coefficient dust * gamma.
struct AtomicHazardRealization {
  double dust_coefficient = 0.0;
  std::vector<WeightedAtom> atoms;

  double total_mass() const;
  void validate() const;
};

// ---- the scheme itself -----------------------------------------------------

// Direct sampler: i.i.d. driving rows Y_1..Y_n, one independent urn per atom
// that ever appears, X_j{s} = Y at the arrival time of row j's token.  Urns
// are only instantiated for atoms that appear in some Y_j, so work is
// bounded by (atoms seen) x n.
std::vector<BernoulliRealization> cou_direct(const HazardMeasureSpec& spec,
                                             const PartitionModel& model, int n,
                                             Rng& rng);

// Buffet-style sampler for specs without fixed atoms: row j brings
// Poisson(gamma * f(j,1)) fresh atoms and keeps an atom seen k times among
// the previous j-1 rows with probability f(j,k+1)/f(j-1,k).
std::vector<BernoulliRealization> cou_sequential(const HazardMeasureSpec& spec,
                                                 const PartitionModel& model, int n,
                                                 Rng& rng);

// ---- stick-breaking constructions of the directing measure -----------------

// By first-appearance round: round m carries Poisson(gamma * (f(m,1) - dust))
// atoms with weights drawn from the (1-p)^{m-1}-tilted structural law on
// (0,1].
AtomicHazardRealization gbp_stick_by_round(const HazardMeasureSpec& spec,
                                           const PartitionModel& model, int rounds,
                                           Rng& rng);

// By block index: level t carries Poisson(gamma) atoms, each weighted by an
// independent copy of the t-th stick-breaking frequency.  Zero-weight draws
// (possible only with dust) are dropped.
AtomicHazardRealization gbp_stick_by_block(const HazardMeasureSpec& spec,
                                           const PartitionModel& model, int blocks,
                                           Rng& rng);

// Expected ordinary mass beyond the first k-1 rounds; bounds the probability
// that a draw from the truncated measure differs from an untruncated one.
double truncation_bound(const PartitionModel& model, double gamma, int k);

// Conditional law of the directing measure given n observed rows, summarized
// by an allocation with atom records: each observed atom keeps its id and
// receives a tilted weight (or is explained as dust and dropped, for
// singletons under positive dust mass); the unseen part is rounds n+1..n+R.
AtomicHazardRealization posterior_sample(const HazardMeasureSpec& spec,
                                         const PartitionModel& model,
                                         const FeatureAllocation& allocation,
                                         int rounds, Rng& rng);

// ---- one-step predictive ----------------------------------------------------

struct OrdinaryAtomState {
  std::uint64_t id = 0;
  double location = 0.0;
  int count = 0;      // rows containing the atom so far
  int first_row = 0;  // 1-based
};

struct FixedAtomUrn {
  UrnState urn;
  std::vector<std::uint8_t> block_marks;  // one mark per block
};

// Running state of a scheme advanced row by row.
struct CouState {
  int n = 0;
  std::vector<OrdinaryAtomState> ordinary;
  std::vector<FixedAtomUrn> fixed;  // parallel to spec.fixed_atoms
  AtomIdGen ids;

  static CouState fresh(const HazardMeasureSpec& spec);
  void check(const HazardMeasureSpec& spec) const;
};

// Samples row n+1 given the state and advances it.
BernoulliRealization predictive_step(const HazardMeasureSpec& spec,
                                     const PartitionModel& model, CouState& state,
                                     Rng& rng);

}  // namespace urnflow
