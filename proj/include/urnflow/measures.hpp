#pragma once

#include <cstdint>
#include <vector>

#include "urnflow/rng.hpp"

namespace urnflow {

// Location law on [0,1).  Either uniform or a discrete grid of weighted
// locations; the unit interval stands in for a general base space, which
// costs no generality for the laws simulated here.
struct BaseDistribution {
  enum class Kind { uniform, grid } kind = Kind::uniform;
  std::vector<std::pair<double, double>> nodes;  // (location, weight)

  static BaseDistribution uniform() { return {}; }
  static BaseDistribution grid(std::vector<std::pair<double, double>> nodes);
  double draw(Rng& rng) const;
  void validate() const;
};

struct FixedAtom {
  double location = 0.0;
  double mass = 1.0;  // in (0,1]
};

// Mean of the driving simple point processes: nonatomic mass gamma spread
// by `base` plus fixed atoms with heights in (0,1].
struct HazardMeasureSpec {
  double gamma = 0.0;
  BaseDistribution base;
  std::vector<FixedAtom> fixed_atoms;

  double total_mass() const;
  void validate() const;
  bool purely_nonatomic() const { return fixed_atoms.empty(); }
};

enum class AtomOrigin { ordinary, fixed };

struct Atom {
  std::uint64_t id = 0;
  double location = 0.0;
  AtomOrigin origin = AtomOrigin::ordinary;
};

// One simple point process realization; atom identity is carried by id, not
// by floating-point location.  Fixed atom i of the spec always has id == i.
struct BernoulliRealization {
  std::vector<Atom> atoms;
  bool contains(std::uint64_t id) const;
};

// Source of fresh ordinary-atom ids.  Start it past the fixed-atom ids.
struct AtomIdGen {
  std::uint64_t next = 0;
  std::uint64_t fresh() { return next++; }
};
AtomIdGen make_id_gen(const HazardMeasureSpec& spec);

std::vector<Atom> sample_poisson_points(double mass, const BaseDistribution& base,
                                        Rng& rng, AtomIdGen& ids);

// Ordinary atom count ~ Poisson(gamma) at i.i.d. base locations; each fixed
// atom enters independently with probability equal to its mass.
BernoulliRealization sample_bernoulli(const HazardMeasureSpec& spec, Rng& rng,
                                      AtomIdGen& ids);

struct Interval {
  double lo = 0.0;
  double hi = 1.0;  // [lo, hi)
  bool contains(double x) const { return x >= lo && x < hi; }
};

// n^{-1} sum_i X_i(A) for each test set A.
std::vector<double> lln_average(const std::vector<BernoulliRealization>& realizations,
                                const std::vector<Interval>& test_sets);

}  // namespace urnflow
