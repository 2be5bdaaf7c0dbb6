#include "urnflow/urn.hpp"

#include <cassert>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "urnflow/errors.hpp"

namespace urnflow {

namespace {
constexpr long kMaxSticks = 100000000;  // stick loops degenerate into hangs without a cap

double stick_for(const PartitionModel& model, int j, Rng& rng) {
  switch (model.kind) {
    case ModelKind::crp1:
      return beta_draw(rng, 1.0, model.theta);
    case ModelKind::crp2:
      return beta_draw(rng, 1.0 - model.alpha, model.theta + j * model.alpha);
    case ModelKind::generic:
      if (!model.stick_sampler)
        throw unsupported_operation("stick frequencies: generic model carries no frequency sampler");
      return model.stick_sampler(rng, j);
  }
  throw std::logic_error("unreachable");
}

double kernel_series(const PartitionModel& model, double q, double tol, Rng& rng) {
  double value = 0.0;
  double residual = 1.0;
  long j = 1;
  while (residual >= tol) {
    if (j > kMaxSticks) {
      std::ostringstream msg;
      msg << "kernel series: residual " << residual << " above tol " << tol
          << " after " << kMaxSticks << " sticks";
      throw sampling_error(msg.str());
    }
    double v = stick_for(model, int(std::min<long>(j, 1 << 30)), rng);
    double p = v * residual;
    if (bernoulli(rng, q)) value += p;
    residual *= (1.0 - v);
    ++j;
  }
  // the unresolved remainder contributes q in expectation and at most
  // residual < tol in absolute value
  return value + residual * q;
}
}  // namespace

void UrnState::check() const {
  assert(int(assignment.size()) == n);
  assert(int(arrival.size()) == n);
  int total = 0;
  for (int s : block_sizes) total += s;
  assert(total == n);
  for (int i = 0; i < n; ++i) {
    assert(arrival[i] >= 1 && arrival[i] <= i + 1);
    assert(arrival[arrival[i] - 1] == arrival[i]);
    assert(assignment[i] >= 0 && assignment[i] < blocks());
    assert(block_first[assignment[i]] == arrival[i]);
  }
  for (int b = 1; b < blocks(); ++b) assert(block_first[b - 1] < block_first[b]);
}

int urn_step(const PartitionModel& model, UrnState& state, Rng& rng) {
  PredictiveWeights w = predictive_weights(model, state.block_sizes);
  double u = uniform01(rng);
  int chosen = state.blocks();  // fresh block unless an existing one claims u
  double acc = 0.0;
  for (int b = 0; b < int(w.existing.size()); ++b) {
    acc += w.existing[b];
    if (u < acc) {
      chosen = b;
      break;
    }
  }
  ++state.n;
  state.assignment.push_back(chosen);
  if (chosen == state.blocks()) {
    state.block_sizes.push_back(1);
    state.block_first.push_back(state.n);
  } else {
    ++state.block_sizes[chosen];
  }
  state.arrival.push_back(state.block_first[chosen]);
  return chosen;
}

UrnState sample_partition(const PartitionModel& model, int n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("sample_partition: need n >= 1");
  UrnState state;
  for (int i = 0; i < n; ++i) urn_step(model, state, rng);
  return state;
}

double stick_draw(const PartitionModel& model, int j, Rng& rng) {
  if (j < 1) throw std::invalid_argument("stick_draw: index starts at 1");
  return stick_for(model, j, rng);
}

FrequencySequence stick_frequencies(const PartitionModel& model, int m, Rng& rng) {
  if (m < 1) throw std::invalid_argument("stick_frequencies: need m >= 1");
  FrequencySequence f;
  f.weights.reserve(m);
  double residual = 1.0;
  for (int j = 1; j <= m; ++j) {
    double v = stick_for(model, j, rng);
    f.weights.push_back(v * residual);
    residual *= (1.0 - v);
  }
  f.residual = residual;
  return f;
}

double sample_kernel(const PartitionModel& model, double q, double tol, Rng& rng) {
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("kernel: q outside [0,1]");
  if (tol <= 0.0) throw std::invalid_argument("kernel: tol must be positive");
  if (q == 0.0) return 0.0;
  if (q == 1.0) return 1.0;
  if (model.kind == ModelKind::crp1)
    return beta_draw(rng, model.theta * q, model.theta * (1.0 - q));
  if (!model.has_sticks())
    throw unsupported_operation("kernel: generic model carries no frequency sampler");
  return kernel_series(model, q, tol, rng);
}

double sample_kernel_truncated(const PartitionModel& model, double q, double tol, Rng& rng) {
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("kernel: q outside [0,1]");
  if (tol <= 0.0) throw std::invalid_argument("kernel: tol must be positive");
  if (q == 0.0) return 0.0;
  if (q == 1.0) return 1.0;
  if (!model.has_sticks())
    throw unsupported_operation("kernel: generic model carries no frequency sampler");
  return kernel_series(model, q, tol, rng);
}

double sample_posterior_atom_ordinary(const PartitionModel& model, int k, int n,
                                      Rng& rng, long max_attempts) {
  if (n < 1 || k < 1 || k > n)
    throw std::invalid_argument("posterior atom: need 1 <= k <= n");
  switch (model.kind) {
    case ModelKind::crp1:
      return beta_draw(rng, double(k), double(n - k) + model.theta);
    case ModelKind::crp2:
      return beta_draw(rng, k - model.alpha, n - k + model.theta + model.alpha);
    case ModelKind::generic:
      break;
  }
  const StructuralDistribution& nu = model.nu1;
  if (nu.dust >= 1.0)
    throw std::invalid_argument("posterior atom: structural distribution is pure dust");
  if (!nu.is_beta) {
    // the grid is the measure: tilt the weights exactly
    std::vector<double> w(nu.grid.size());
    double total = 0.0;
    for (std::size_t i = 0; i < nu.grid.size(); ++i) {
      auto [p, wt] = nu.grid[i];
      w[i] = wt * std::pow(p, k - 1) * std::pow(1.0 - p, n - k);
      total += w[i];
    }
    if (total <= 0.0)
      throw sampling_error("posterior atom: tilted grid has no mass");
    double u = uniform01(rng) * total;
    for (std::size_t i = 0; i < nu.grid.size(); ++i) {
      u -= w[i];
      if (u <= 0.0) return nu.grid[i].first;
    }
    return nu.grid.back().first;
  }
  // rejection from the continuous part; envelope is the likelihood maximum
  // at p* = (k-1)/(n-1)
  double log_env = 0.0;
  if (n > 1) {
    double pstar = double(k - 1) / double(n - 1);
    if (k > 1) log_env += (k - 1) * std::log(pstar);
    if (k < n) log_env += (n - k) * std::log1p(-pstar);
  }
  for (long attempt = 0; attempt < max_attempts; ++attempt) {
    double p = beta_draw(rng, nu.beta_a, nu.beta_b);
    if (p <= 0.0 || p >= 1.0) continue;
    double log_accept = -log_env;
    if (k > 1) log_accept += (k - 1) * std::log(p);
    if (k < n) log_accept += (n - k) * std::log1p(-p);
    if (std::log(uniform01(rng)) < log_accept) return p;
  }
  std::ostringstream msg;
  msg << "posterior atom: rejection failed after " << max_attempts
      << " attempts (k=" << k << ", n=" << n << ", beta_a=" << nu.beta_a
      << ", beta_b=" << nu.beta_b << ")";
  throw sampling_error(msg.str());
}

double sample_posterior_atom_fixed(const PartitionModel& model, double q, int k,
                                   int n, double tol, Rng& rng, long max_attempts) {
  if (q <= 0.0 || q > 1.0) throw std::invalid_argument("posterior atom: q outside (0,1]");
  if (n < 1 || k < 0 || k > n)
    throw std::invalid_argument("posterior atom: need 0 <= k <= n");
  double pstar = double(k) / double(n);
  double log_env = 0.0;
  if (k > 0) log_env += k * std::log(pstar);
  if (k < n) log_env += (n - k) * std::log1p(-pstar);
  for (long attempt = 0; attempt < max_attempts; ++attempt) {
    double w = sample_kernel(model, q, tol, rng);
    if (w <= 0.0) {
      if (k == 0) return tol;  // below resolution but almost surely positive
      continue;
    }
    if (w >= 1.0) {
      if (k == n) return 1.0;
      continue;
    }
    double log_accept = -log_env;
    if (k > 0) log_accept += k * std::log(w);
    if (k < n) log_accept += (n - k) * std::log1p(-w);
    if (std::log(uniform01(rng)) < log_accept) return w;
  }
  std::ostringstream msg;
  msg << "posterior atom: kernel rejection failed after " << max_attempts
      << " attempts (q=" << q << ", k=" << k << ", n=" << n << ")";
  throw sampling_error(msg.str());
}

}  // namespace urnflow
