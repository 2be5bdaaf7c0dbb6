#include "urnflow/measures.hpp"

#include <cmath>
#include <stdexcept>

namespace urnflow {

BaseDistribution BaseDistribution::grid(std::vector<std::pair<double, double>> nodes) {
  BaseDistribution b;
  b.kind = Kind::grid;
  b.nodes = std::move(nodes);
  b.validate();
  return b;
}

void BaseDistribution::validate() const {
  if (kind == Kind::uniform) return;
  if (nodes.empty()) throw std::invalid_argument("base: empty grid");
  double total = 0.0;
  for (auto [loc, w] : nodes) {
    if (loc < 0.0 || loc >= 1.0)
      throw std::invalid_argument("base: locations must lie in [0,1)");
    if (w < 0.0) throw std::invalid_argument("base: negative weight");
    total += w;
  }
  if (std::fabs(total - 1.0) > 1e-12)
    throw std::invalid_argument("base: weights must sum to 1");
}

double BaseDistribution::draw(Rng& rng) const {
  if (kind == Kind::uniform) return uniform01(rng);
  double u = uniform01(rng);
  for (auto [loc, w] : nodes) {
    u -= w;
    if (u <= 0.0) return loc;
  }
  return nodes.back().first;
}

double HazardMeasureSpec::total_mass() const {
  double t = gamma;
  for (const auto& a : fixed_atoms) t += a.mass;
  return t;
}

void HazardMeasureSpec::validate() const {
  if (!(gamma >= 0.0) || !std::isfinite(gamma))
    throw std::invalid_argument("hazard spec: gamma must be finite and nonnegative");
  base.validate();
  for (std::size_t i = 0; i < fixed_atoms.size(); ++i) {
    const auto& a = fixed_atoms[i];
    if (a.mass <= 0.0 || a.mass > 1.0)
      throw std::invalid_argument("hazard spec: atom masses must lie in (0,1]");
    if (a.location < 0.0 || a.location >= 1.0)
      throw std::invalid_argument("hazard spec: atom locations must lie in [0,1)");
    for (std::size_t j = i + 1; j < fixed_atoms.size(); ++j)
      if (fixed_atoms[j].location == a.location)
        throw std::invalid_argument("hazard spec: duplicate atom locations");
  }
}

bool BernoulliRealization::contains(std::uint64_t id) const {
  for (const auto& a : atoms)
    if (a.id == id) return true;
  return false;
}

AtomIdGen make_id_gen(const HazardMeasureSpec& spec) {
  return AtomIdGen{spec.fixed_atoms.size()};
}

std::vector<Atom> sample_poisson_points(double mass, const BaseDistribution& base,
                                        Rng& rng, AtomIdGen& ids) {
  if (mass < 0.0) throw std::invalid_argument("poisson points: negative mass");
  long count = poisson_draw(rng, mass);
  std::vector<Atom> atoms;
  atoms.reserve(count);
  for (long i = 0; i < count; ++i)
    atoms.push_back({ids.fresh(), base.draw(rng), AtomOrigin::ordinary});
  return atoms;
}

BernoulliRealization sample_bernoulli(const HazardMeasureSpec& spec, Rng& rng,
                                      AtomIdGen& ids) {
  BernoulliRealization x;
  for (std::size_t i = 0; i < spec.fixed_atoms.size(); ++i)
    if (bernoulli(rng, spec.fixed_atoms[i].mass))
      x.atoms.push_back({i, spec.fixed_atoms[i].location, AtomOrigin::fixed});
  auto ordinary = sample_poisson_points(spec.gamma, spec.base, rng, ids);
  x.atoms.insert(x.atoms.end(), ordinary.begin(), ordinary.end());
  return x;
}

std::vector<double> lln_average(const std::vector<BernoulliRealization>& realizations,
                                const std::vector<Interval>& test_sets) {
  if (realizations.empty())
    throw std::invalid_argument("lln_average: empty realization list");
  std::vector<double> out(test_sets.size(), 0.0);
  for (const auto& x : realizations)
    for (const auto& a : x.atoms)
      for (std::size_t s = 0; s < test_sets.size(); ++s)
        if (test_sets[s].contains(a.location)) out[s] += 1.0;
  for (double& v : out) v /= double(realizations.size());
  return out;
}

}  // namespace urnflow
