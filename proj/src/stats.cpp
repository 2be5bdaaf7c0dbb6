#include "urnflow/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cmath>
#include <map>
#include <stdexcept>
#include <thread>

namespace urnflow {

namespace {

// Lower incomplete gamma by series expansion, valid for x < a+1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper incomplete gamma by Lentz continued fraction, valid for x >= a+1.
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double betacf(double a, double b, double x) {
  const double tiny = 1e-300;
  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 500; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return h;
}

// Asymptotic Kolmogorov tail probability.
double ks_q(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 200; ++j) {
    double term = sign * std::exp(-2.0 * j * j * lambda * lambda);
    sum += term;
    if (std::fabs(term) < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_pvalue(double d, double n_eff) {
  double sq = std::sqrt(n_eff);
  return ks_q((sq + 0.12 + 0.11 / sq) * d);
}

double simpson(const std::function<double(double)>& f, double a, double b,
               double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double b,
                double fa, double fm, double fb, double whole, double tol,
                int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = simpson(f, a, m, fa, flm, fm);
  double right = simpson(f, m, b, fm, frm, fb);
  if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         adaptive(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

}  // namespace

double gamma_p(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_p: bad arguments");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_q: bad arguments");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double beta_inc(double a, double b, double x) {
  if (a <= 0.0 || b <= 0.0) throw std::invalid_argument("beta_inc: bad shape");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double lfront = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                  a * std::log(x) + b * std::log1p(-x);
  double front = std::exp(lfront);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
  return 1.0 - std::exp(lfront) * betacf(b, a, 1.0 - x) / b;
}

double beta_cdf(double a, double b, double x) { return beta_inc(a, b, x); }

double poisson_pmf(long k, double mean) {
  if (k < 0) return 0.0;
  if (mean <= 0.0) return k == 0 ? 1.0 : 0.0;
  return std::exp(k * std::log(mean) - mean - std::lgamma(double(k) + 1.0));
}

double poisson_cdf(long k, double mean) {
  if (k < 0) return 0.0;
  if (mean <= 0.0) return 1.0;
  return gamma_q(double(k) + 1.0, mean);
}

double chi2_sf(double x, double dof) {
  if (x <= 0.0) return 1.0;
  return gamma_q(dof / 2.0, x / 2.0);
}

double log_sum_exp(const std::vector<double>& xs) {
  if (xs.empty()) return -std::numeric_limits<double>::infinity();
  double m = *std::max_element(xs.begin(), xs.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  double m = 0.5 * (a + b);
  double fa = f(a), fm = f(m), fb = f(b);
  double whole = simpson(f, a, b, fa, fm, fb);
  return adaptive(f, a, b, fa, fm, fb, whole, tol, 48);
}

Moments moments(const std::vector<double>& xs) {
  Moments m;
  m.n = long(xs.size());
  if (m.n == 0) return m;
  double s = 0.0;
  for (double x : xs) s += x;
  m.mean = s / double(m.n);
  if (m.n > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    m.var = ss / double(m.n - 1);
  }
  return m;
}

double z_score(const Moments& m, double expected_mean) {
  if (m.n == 0) return 0.0;
  double se = std::sqrt(m.var / double(m.n));
  if (se == 0.0) return m.mean == expected_mean ? 0.0 : std::numeric_limits<double>::infinity();
  return std::fabs(m.mean - expected_mean) / se;
}

double sample_correlation(const std::vector<double>& xs, const std::vector<double>& ys) {
  assert(xs.size() == ys.size());
  Moments mx = moments(xs), my = moments(ys);
  if (mx.var == 0.0 || my.var == 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    s += (xs[i] - mx.mean) * (ys[i] - my.mean);
  s /= double(xs.size() - 1);
  return s / std::sqrt(mx.var * my.var);
}

KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_test: no samples");
  std::sort(samples.begin(), samples.end());
  double n = double(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double F = cdf(samples[i]);
    d = std::max(d, std::fabs(double(i + 1) / n - F));
    d = std::max(d, std::fabs(F - double(i) / n));
  }
  return {d, ks_pvalue(d, n), long(samples.size())};
}

KsResult ks_test2(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_test2: no samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(double(i) / a.size() - double(j) / b.size()));
  }
  double n_eff = double(a.size()) * double(b.size()) / double(a.size() + b.size());
  return {d, ks_pvalue(d, n_eff), long(std::min(a.size(), b.size()))};
}

Chi2Result chi2_gof_counts(const std::vector<long>& draws,
                           const std::function<double(long)>& pmf,
                           double min_expected) {
  if (draws.empty()) throw std::invalid_argument("chi2_gof_counts: no samples");
  long maxv = *std::max_element(draws.begin(), draws.end());
  double n = double(draws.size());
  std::vector<double> observed(maxv + 2, 0.0), expected(maxv + 2, 0.0);
  for (long d : draws) observed[d] += 1.0;
  double cum = 0.0;
  for (long k = 0; k <= maxv; ++k) {
    expected[k] = n * pmf(k);
    cum += pmf(k);
  }
  expected[maxv + 1] = n * std::max(0.0, 1.0 - cum);  // upper tail bin

  // pool sparse bins from the right
  std::vector<double> obs, exp_;
  double po = 0.0, pe = 0.0;
  for (std::size_t k = 0; k < expected.size(); ++k) {
    po += observed[k];
    pe += expected[k];
    if (pe >= min_expected) {
      obs.push_back(po);
      exp_.push_back(pe);
      po = pe = 0.0;
    }
  }
  if (pe > 0.0 && !exp_.empty()) {
    obs.back() += po;
    exp_.back() += pe;
  }
  if (exp_.size() < 2) return {0.0, 1.0, 0};
  double stat = 0.0;
  for (std::size_t k = 0; k < exp_.size(); ++k)
    stat += (obs[k] - exp_[k]) * (obs[k] - exp_[k]) / exp_[k];
  long dof = long(exp_.size()) - 1;
  return {stat, chi2_sf(stat, double(dof)), dof};
}

Chi2Result chi2_independence(const std::vector<std::pair<long, long>>& pairs, long cap) {
  if (pairs.empty()) throw std::invalid_argument("chi2_independence: no samples");
  long r = cap + 1, c = cap + 1;
  std::vector<double> table(r * c, 0.0);
  for (auto [a, b] : pairs) {
    long i = std::min(a, cap), j = std::min(b, cap);
    table[i * c + j] += 1.0;
  }
  std::vector<double> rows(r, 0.0), cols(c, 0.0);
  double n = double(pairs.size());
  for (long i = 0; i < r; ++i)
    for (long j = 0; j < c; ++j) {
      rows[i] += table[i * c + j];
      cols[j] += table[i * c + j];
    }
  double stat = 0.0;
  long used_r = 0, used_c = 0;
  for (long i = 0; i < r; ++i)
    if (rows[i] > 0) ++used_r;
  for (long j = 0; j < c; ++j)
    if (cols[j] > 0) ++used_c;
  for (long i = 0; i < r; ++i)
    for (long j = 0; j < c; ++j) {
      double e = rows[i] * cols[j] / n;
      if (e < 1e-9) continue;
      double d = table[i * c + j] - e;
      stat += d * d / e;
    }
  long dof = (used_r - 1) * (used_c - 1);
  if (dof <= 0) return {0.0, 1.0, 0};
  return {stat, chi2_sf(stat, double(dof)), dof};
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  unsigned workers = std::min<unsigned>(std::thread::hardware_concurrency(), 8);
  if (workers <= 1 || n < 4) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
}

}  // namespace urnflow
