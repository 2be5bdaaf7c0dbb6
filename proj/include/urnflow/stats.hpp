#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace urnflow {

// ---- special functions -------------------------------------------------

// Regularized lower incomplete gamma P(a,x); Q(a,x) = 1 - P(a,x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Regularized incomplete beta I_x(a,b).
double beta_inc(double a, double b, double x);

double beta_cdf(double a, double b, double x);
double poisson_pmf(long k, double mean);
double poisson_cdf(long k, double mean);
double chi2_sf(double x, double dof);   // upper tail of chi-square

double log_sum_exp(const std::vector<double>& xs);

// Adaptive Simpson quadrature on [a,b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-12);

// ---- sample summaries ----------------------------------------------------

struct Moments {
  long n = 0;
  double mean = 0.0;
  double var = 0.0;  // unbiased
};
Moments moments(const std::vector<double>& xs);

// |observed mean - expected| measured in standard errors.
double z_score(const Moments& m, double expected_mean);

double sample_correlation(const std::vector<double>& xs, const std::vector<double>& ys);

// ---- hypothesis tests ------------------------------------------------------

struct KsResult {
  double statistic = 0.0;  // D
  double p_value = 1.0;
  long n = 0;
};

// One-sample KS against a cdf; samples need not be sorted.
KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf);
// Two-sample KS.
KsResult ks_test2(std::vector<double> a, std::vector<double> b);

struct Chi2Result {
  double statistic = 0.0;
  double p_value = 1.0;
  long dof = 0;
};

// Goodness of fit of integer counts against pmf(k); bins with expected
// count below `min_expected` are pooled into their neighbor.
Chi2Result chi2_gof_counts(const std::vector<long>& draws,
                           const std::function<double(long)>& pmf,
                           double min_expected = 5.0);

// Independence test on a pair sample of small nonnegative integers.
Chi2Result chi2_independence(const std::vector<std::pair<long, long>>& pairs,
                             long cap = 4);

// ---- deterministic parallel map -------------------------------------------

// Runs fn(i) for i in [0, n) on a small worker pool.  Results must be
// written into per-index slots by the caller; scheduling order carries no
// randomness because every index derives its own RNG stream.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace urnflow
