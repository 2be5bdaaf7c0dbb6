#include "urnflow/cou.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "urnflow/errors.hpp"

namespace urnflow {

namespace {

double dust_of(const PartitionModel& model) {
  return model.kind == ModelKind::generic ? model.nu1.dust : 0.0;
}

void require_nonatomic(const HazardMeasureSpec& spec, const char* who) {
  spec.validate();
  if (!spec.purely_nonatomic()) {
    std::ostringstream msg;
    msg << who << ": fixed atoms are handled by the direct sampler only";
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

std::string OriginTag::str() const {
  switch (kind) {
    case Kind::round:
      return "round:" + std::to_string(index);
    case Kind::block:
      return "block:" + std::to_string(index);
    case Kind::fixed:
      return "fixed";
  }
  return "fixed";
}

double AtomicHazardRealization::total_mass() const {
  double t = dust_coefficient;
  for (const auto& a : atoms) t += a.weight;
  return t;
}

void AtomicHazardRealization::validate() const {
  if (dust_coefficient < 0.0)
    throw std::invalid_argument("hazard realization: negative dust coefficient");
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (atoms[i].weight <= 0.0 || atoms[i].weight > 1.0)
      throw std::invalid_argument("hazard realization: weight outside (0,1]");
    for (std::size_t j = i + 1; j < atoms.size(); ++j)
      if (atoms[j].id == atoms[i].id)
        throw std::invalid_argument("hazard realization: duplicate atom id");
  }
}

std::vector<BernoulliRealization> cou_direct(const HazardMeasureSpec& spec,
                                             const PartitionModel& model, int n,
                                             Rng& rng) {
  spec.validate();
  if (n < 1) throw std::invalid_argument("cou_direct: need n >= 1");
  if (!model.has_eppf())
    throw unsupported_operation("cou_direct: model does not support urn stepping");

  std::vector<BernoulliRealization> rows(n);

  // fixed atoms: driving marks y_1..y_n plus one urn; row j carries the atom
  // iff the mark at the arrival time of its token is set
  for (std::size_t i = 0; i < spec.fixed_atoms.size(); ++i) {
    const FixedAtom& s = spec.fixed_atoms[i];
    std::vector<std::uint8_t> marks(n);
    for (int m = 0; m < n; ++m) marks[m] = bernoulli(rng, s.mass);
    UrnState urn = sample_partition(model, n, rng);
    for (int j = 0; j < n; ++j)
      if (marks[urn.arrival[j] - 1])
        rows[j].atoms.push_back({i, s.location, AtomOrigin::fixed});
  }

  // ordinary atoms: those born in driving row m appear in exactly the rows
  // whose token arrives at m
  AtomIdGen ids = make_id_gen(spec);
  for (int m = 1; m <= n; ++m) {
    long born = poisson_draw(rng, spec.gamma);
    for (long b = 0; b < born; ++b) {
      Atom atom{ids.fresh(), spec.base.draw(rng), AtomOrigin::ordinary};
      UrnState urn = sample_partition(model, n, rng);
      for (int j = m - 1; j < n; ++j)
        if (urn.arrival[j] == m) rows[j].atoms.push_back(atom);
    }
  }
  return rows;
}

std::vector<BernoulliRealization> cou_sequential(const HazardMeasureSpec& spec,
                                                 const PartitionModel& model, int n,
                                                 Rng& rng) {
  require_nonatomic(spec, "cou_sequential");
  if (n < 1) throw std::invalid_argument("cou_sequential: need n >= 1");

  std::vector<BernoulliRealization> rows(n);
  struct Tracked {
    Atom atom;
    int count;
  };
  std::vector<Tracked> seen;
  AtomIdGen ids = make_id_gen(spec);
  for (int j = 1; j <= n; ++j) {
    for (auto& t : seen) {
      if (bernoulli(rng, persistence_prob(model, j - 1, t.count))) {
        rows[j - 1].atoms.push_back(t.atom);
        ++t.count;
      }
    }
    long born = poisson_draw(rng, spec.gamma * new_token_rate(model, j));
    for (long b = 0; b < born; ++b) {
      Atom atom{ids.fresh(), spec.base.draw(rng), AtomOrigin::ordinary};
      rows[j - 1].atoms.push_back(atom);
      seen.push_back({atom, 1});
    }
  }
  return rows;
}

AtomicHazardRealization gbp_stick_by_round(const HazardMeasureSpec& spec,
                                           const PartitionModel& model, int rounds,
                                           Rng& rng) {
  require_nonatomic(spec, "gbp_stick_by_round");
  if (rounds < 1) throw std::invalid_argument("gbp_stick_by_round: need rounds >= 1");
  double dust = dust_of(model);
  AtomicHazardRealization h;
  h.dust_coefficient = dust * spec.gamma;
  AtomIdGen ids = make_id_gen(spec);
  for (int m = 1; m <= rounds; ++m) {
    // intensity restricted to (0,1]: the atom of the structural law at zero
    // never produces a point with positive weight
    double mean = spec.gamma * (f_nk(model, m, 1) - dust);
    long count = poisson_draw(rng, mean);
    for (long c = 0; c < count; ++c) {
      double w = sample_posterior_atom_ordinary(model, 1, m, rng);
      h.atoms.push_back({ids.fresh(), spec.base.draw(rng), w, OriginTag::round(m)});
    }
  }
  return h;
}

AtomicHazardRealization gbp_stick_by_block(const HazardMeasureSpec& spec,
                                           const PartitionModel& model, int blocks,
                                           Rng& rng) {
  require_nonatomic(spec, "gbp_stick_by_block");
  if (blocks < 1) throw std::invalid_argument("gbp_stick_by_block: need blocks >= 1");
  if (!model.has_sticks())
    throw unsupported_operation("gbp_stick_by_block: generic model carries no frequency sampler");
  AtomicHazardRealization h;
  h.dust_coefficient = dust_of(model) * spec.gamma;
  AtomIdGen ids = make_id_gen(spec);
  for (int t = 1; t <= blocks; ++t) {
    long count = poisson_draw(rng, spec.gamma);
    for (long c = 0; c < count; ++c) {
      // independent sticks per atom; the weight is the t-th frequency
      double residual = 1.0;
      double w = 0.0;
      for (int j = 1; j <= t; ++j) {
        double v = stick_draw(model, j, rng);
        w = v * residual;
        residual *= (1.0 - v);
      }
      if (w <= 0.0) continue;  // dust block: frequency zero, not an atom
      h.atoms.push_back({ids.fresh(), spec.base.draw(rng), w, OriginTag::block(t)});
    }
  }
  return h;
}

double truncation_bound(const PartitionModel& model, double gamma, int k) {
  if (gamma < 0.0) throw std::invalid_argument("truncation bound: negative gamma");
  if (k < 1) throw std::invalid_argument("truncation bound: need k >= 1");
  return gamma * (f_nk(model, k, 1) - dust_of(model));
}

AtomicHazardRealization posterior_sample(const HazardMeasureSpec& spec,
                                         const PartitionModel& model,
                                         const FeatureAllocation& allocation,
                                         int rounds, Rng& rng) {
  require_nonatomic(spec, "posterior_sample");
  if (rounds < 1) throw std::invalid_argument("posterior_sample: need rounds >= 1");
  int n = 0;
  if (!allocation.counts.empty() || allocation.n > 0) {
    allocation.validate();
    if (!allocation.has_atoms && !allocation.counts.empty())
      throw std::invalid_argument("posterior_sample: allocation needs atom records");
    n = allocation.n;
  }
  double dust = dust_of(model);
  AtomicHazardRealization h;
  h.dust_coefficient = dust * spec.gamma;
  AtomIdGen ids{allocation.atoms.size() + spec.fixed_atoms.size()};
  for (const auto& rec : allocation.atoms) {
    if (std::uint64_t(rec.id) >= ids.next) ids.next = rec.id + 1;
  }

  // observed atoms: tilted weight, or an exact zero (dust explanation) for
  // singleton histories when the structural law has an atom at zero
  for (const auto& rec : allocation.atoms) {
    int k = history_size(rec.history);
    if (k == 1 && dust > 0.0) {
      double zero_prob = dust / f_nk(model, n, 1);
      if (bernoulli(rng, zero_prob)) continue;
    }
    double w = sample_posterior_atom_ordinary(model, k, n, rng);
    h.atoms.push_back({rec.id, rec.location, w, OriginTag::fixed()});
  }

  // unseen ordinary part: the residual intensity p^{-1}(1-p)^n nu1 splits
  // into rounds n+1, n+2, ... of the by-round construction
  for (int m = n + 1; m <= n + rounds; ++m) {
    double mean = spec.gamma * (f_nk(model, m, 1) - dust);
    long count = poisson_draw(rng, mean);
    for (long c = 0; c < count; ++c) {
      double w = sample_posterior_atom_ordinary(model, 1, m, rng);
      h.atoms.push_back({ids.fresh(), spec.base.draw(rng), w, OriginTag::round(m)});
    }
  }
  return h;
}

CouState CouState::fresh(const HazardMeasureSpec& spec) {
  spec.validate();
  CouState s;
  s.fixed.resize(spec.fixed_atoms.size());
  s.ids = make_id_gen(spec);
  return s;
}

void CouState::check(const HazardMeasureSpec& spec) const {
  assert(fixed.size() == spec.fixed_atoms.size());
  for (const auto& f : fixed) {
    assert(f.urn.n == n);
    assert(f.block_marks.size() == std::size_t(f.urn.blocks()));
  }
  for (const auto& o : ordinary) {
    assert(o.first_row >= 1 && o.first_row <= n);
    assert(o.count >= 1 && o.count <= n - o.first_row + 1);
  }
  (void)spec;
}

BernoulliRealization predictive_step(const HazardMeasureSpec& spec,
                                     const PartitionModel& model, CouState& state,
                                     Rng& rng) {
  spec.validate();
  if (state.fixed.size() != spec.fixed_atoms.size())
    throw std::invalid_argument("predictive_step: state does not match spec");
  if (!model.has_eppf())
    throw unsupported_operation("predictive_step: model does not support urn stepping");
  int n = state.n;
  BernoulliRealization row;

  for (std::size_t i = 0; i < state.fixed.size(); ++i) {
    FixedAtomUrn& f = state.fixed[i];
    int b = urn_step(model, f.urn, rng);
    if (b == int(f.block_marks.size()))
      f.block_marks.push_back(bernoulli(rng, spec.fixed_atoms[i].mass));
    if (f.block_marks[b])
      row.atoms.push_back({i, spec.fixed_atoms[i].location, AtomOrigin::fixed});
  }

  for (auto& o : state.ordinary) {
    if (bernoulli(rng, persistence_prob(model, n, o.count))) {
      row.atoms.push_back({o.id, o.location, AtomOrigin::ordinary});
      ++o.count;
    }
  }

  long born = poisson_draw(rng, spec.gamma * new_token_rate(model, n + 1));
  for (long b = 0; b < born; ++b) {
    Atom atom{state.ids.fresh(), spec.base.draw(rng), AtomOrigin::ordinary};
    row.atoms.push_back(atom);
    state.ordinary.push_back({atom.id, atom.location, 1, n + 1});
  }

  ++state.n;
  return row;
}

}  // namespace urnflow
