#include "urnflow/eppf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "urnflow/errors.hpp"

namespace urnflow {

namespace {
constexpr double kMassTol = 1e-12;

void check_crp2_params(double theta, double alpha) {
  if (alpha < 0.0 || alpha >= 1.0)
    throw std::invalid_argument("crp2: discount must lie in [0,1)");
  if (theta <= -alpha)
    throw std::invalid_argument("crp2: concentration must exceed -discount");
}
}  // namespace

StructuralDistribution StructuralDistribution::beta(double a, double b, double dust) {
  StructuralDistribution d;
  d.dust = dust;
  d.is_beta = true;
  d.beta_a = a;
  d.beta_b = b;
  d.validate();
  return d;
}

StructuralDistribution StructuralDistribution::numeric_grid(
    std::vector<std::pair<double, double>> nodes, double dust) {
  StructuralDistribution d;
  d.dust = dust;
  d.is_beta = false;
  d.grid = std::move(nodes);
  d.validate();
  return d;
}

void StructuralDistribution::validate() const {
  if (dust < 0.0 || dust > 1.0)
    throw std::invalid_argument("structural distribution: dust outside [0,1]");
  if (is_beta) {
    if (beta_a <= 0.0 || beta_b <= 0.0)
      throw std::invalid_argument("structural distribution: beta shapes must be positive");
  } else {
    double total = dust;
    for (auto [p, w] : grid) {
      if (p <= 0.0 || p > 1.0)
        throw std::invalid_argument("structural distribution: grid nodes must lie in (0,1]");
      if (w < 0.0)
        throw std::invalid_argument("structural distribution: negative grid weight");
      total += w;
    }
    if (std::fabs(total - 1.0) > kMassTol)
      throw std::invalid_argument("structural distribution: total mass not 1");
  }
}

double StructuralDistribution::moment(int n, int k) const {
  if (k < 1 || k > n) throw std::invalid_argument("moment: need 1 <= k <= n");
  double atom = (k == 1) ? dust : 0.0;
  if (is_beta) {
    // (1-dust) * B(a+k-1, b+n-k) / B(a,b)
    double lg = std::lgamma(beta_a + k - 1) + std::lgamma(beta_b + n - k) -
                std::lgamma(beta_a + beta_b + n - 1) -
                (std::lgamma(beta_a) + std::lgamma(beta_b) - std::lgamma(beta_a + beta_b));
    return atom + (1.0 - dust) * std::exp(lg);
  }
  double s = 0.0;
  for (auto [p, w] : grid)
    s += w * std::pow(p, k - 1) * std::pow(1.0 - p, n - k);
  return atom + s;
}

PartitionModel PartitionModel::crp1(double theta) {
  if (theta <= 0.0) throw std::invalid_argument("crp1: concentration must be positive");
  PartitionModel m;
  m.kind = ModelKind::crp1;
  m.theta = theta;
  return m;
}

PartitionModel PartitionModel::crp2(double theta, double alpha) {
  check_crp2_params(theta, alpha);
  PartitionModel m;
  m.kind = ModelKind::crp2;
  m.theta = theta;
  m.alpha = alpha;
  return m;
}

PartitionModel PartitionModel::generic(StructuralDistribution nu1) {
  nu1.validate();
  PartitionModel m;
  m.kind = ModelKind::generic;
  m.nu1 = std::move(nu1);
  return m;
}

bool PartitionModel::has_sticks() const {
  return kind != ModelKind::generic || static_cast<bool>(stick_sampler);
}

StructuralDistribution PartitionModel::structural() const {
  switch (kind) {
    case ModelKind::crp1:
      return StructuralDistribution::beta(1.0, theta);
    case ModelKind::crp2:
      return StructuralDistribution::beta(1.0 - alpha, theta + alpha);
    case ModelKind::generic:
      return nu1;
  }
  throw std::logic_error("unreachable");
}

int Composition::n() const {
  int s = 0;
  for (int c : counts) s += c;
  return s;
}

void Composition::validate() const {
  if (counts.empty()) throw std::invalid_argument("composition: needs at least one block");
  for (int c : counts)
    if (c < 1) throw std::invalid_argument("composition: block sizes must be positive");
}

double eppf_log(const PartitionModel& model, const Composition& c) {
  c.validate();
  if (!model.has_eppf())
    throw unsupported_operation("eppf: not determined by a structural distribution alone");
  int n = c.n(), k = c.k();
  double theta = model.theta;
  double alpha = (model.kind == ModelKind::crp2) ? model.alpha : 0.0;
  // accumulate in sorted order so permuted compositions evaluate bit-identically
  std::vector<int> sorted = c.counts;
  std::sort(sorted.begin(), sorted.end());
  // log [theta+alpha]_{k-1;alpha} with [x]_{0;a} = 1
  double lognum = 0.0;
  for (int j = 1; j <= k - 1; ++j) lognum += std::log(theta + j * alpha);
  for (int c_i : sorted)
    lognum += std::lgamma(c_i - alpha) - std::lgamma(1.0 - alpha);
  // log [theta+1]_{n-1} = lgamma(theta+n) - lgamma(theta+1)
  double logden = std::lgamma(theta + n) - std::lgamma(theta + 1.0);
  return lognum - logden;
}

double eppf_eval(const PartitionModel& model, const Composition& c) {
  return std::exp(eppf_log(model, c));
}

PredictiveWeights predictive_weights(const PartitionModel& model,
                                     const std::vector<int>& counts) {
  if (!model.has_eppf())
    throw unsupported_operation("predictive weights: not determined by a structural distribution alone");
  for (int c : counts)
    if (c < 1) throw std::invalid_argument("predictive weights: block sizes must be positive");
  PredictiveWeights w;
  if (counts.empty()) return w;  // first element always opens a block
  int n = 0;
  for (int c : counts) n += c;
  double theta = model.theta;
  double alpha = (model.kind == ModelKind::crp2) ? model.alpha : 0.0;
  double k = double(counts.size());
  w.existing.reserve(counts.size());
  for (int c : counts) w.existing.push_back((c - alpha) / (theta + n));
  w.fresh = (theta + k * alpha) / (theta + n);
  return w;
}

double log_f_nk(const PartitionModel& model, int n, int k) {
  if (n < 1 || k < 1 || k > n)
    throw std::invalid_argument("f(n,k): need 1 <= k <= n");
  switch (model.kind) {
    case ModelKind::crp1:
    case ModelKind::crp2: {
      double theta = model.theta;
      double alpha = (model.kind == ModelKind::crp2) ? model.alpha : 0.0;
      return std::lgamma(theta + 1.0) + std::lgamma(k - alpha) +
             std::lgamma(n - k + theta + alpha) - std::lgamma(1.0 - alpha) -
             std::lgamma(theta + alpha) - std::lgamma(n + theta);
    }
    case ModelKind::generic:
      return std::log(model.nu1.moment(n, k));
  }
  throw std::logic_error("unreachable");
}

double f_nk(const PartitionModel& model, int n, int k) {
  if (model.kind == ModelKind::generic) {
    if (n < 1 || k < 1 || k > n)
      throw std::invalid_argument("f(n,k): need 1 <= k <= n");
    return model.nu1.moment(n, k);
  }
  return std::exp(log_f_nk(model, n, k));
}

double new_token_rate(const PartitionModel& model, int n) {
  return f_nk(model, n, 1);
}

double persistence_prob(const PartitionModel& model, int n, int k) {
  if (n < 1 || k < 1 || k > n)
    throw std::invalid_argument("persistence: need 1 <= k <= n");
  if (model.kind != ModelKind::generic) {
    double alpha = (model.kind == ModelKind::crp2) ? model.alpha : 0.0;
    return (k - alpha) / (model.theta + n);
  }
  double denom = f_nk(model, n, k);
  if (denom <= 0.0)
    throw std::invalid_argument("persistence: f(n,k) vanishes for this model");
  return f_nk(model, n + 1, k + 1) / denom;
}

std::vector<PartitionOutcome> enumerate_partition_probabilities(
    const PartitionModel& model, int n) {
  if (n < 1 || n > 8)
    throw std::invalid_argument("enumerate partitions: need 1 <= n <= 8");
  if (!model.has_eppf())
    throw unsupported_operation("enumerate partitions: model has no EPPF");
  std::vector<PartitionOutcome> out;
  std::vector<int> assignment(n, 0);
  std::vector<int> sizes;
  // restricted-growth enumeration: element i joins an existing block or the
  // next unused index
  auto recurse = [&](auto&& self, int i) -> void {
    if (i == n) {
      Composition c{sizes};
      out.push_back({assignment, eppf_eval(model, c)});
      return;
    }
    for (int b = 0; b < int(sizes.size()); ++b) {
      assignment[i] = b;
      ++sizes[b];
      self(self, i + 1);
      --sizes[b];
    }
    assignment[i] = int(sizes.size());
    sizes.push_back(1);
    self(self, i + 1);
    sizes.pop_back();
  };
  recurse(recurse, 0);
  return out;
}

}  // namespace urnflow
