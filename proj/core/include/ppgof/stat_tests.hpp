#pragma once

#include <span>
#include <string>

namespace ppgof {

enum class TestKind { KS, CvM, AD };

std::string_view test_name(TestKind t);
TestKind test_from_name(std::string_view name);

/// Fully specified continuous null distributions.
enum class NullKind { StdNormal, StdExponential, Uniform01 };

struct NullDistribution {
    NullKind kind = NullKind::StdNormal;
    double cdf(double x) const;
};

struct TestOutcome {
    double statistic = 0.0;
    double p_value = 1.0;
};

/// One-sample Kolmogorov-Smirnov against a fully specified null.
/// D computed exactly at the order statistics; p = 1 - K(sqrt(n) D).
TestOutcome ks_test(std::span<const double> sample, NullDistribution null_dist);

/// Cramer-von Mises: W^2 = 1/(12n) + sum (F(x_(i)) - (2i-1)/(2n))^2,
/// asymptotic p-value for the simple-null limit distribution.
TestOutcome cvm_test(std::span<const double> sample, NullDistribution null_dist);

/// Anderson-Darling with F clipped to [1e-15, 1 - 1e-15] before the logs;
/// asymptotic p-value for the simple-null limit distribution.
TestOutcome ad_test(std::span<const double> sample, NullDistribution null_dist);

TestOutcome run_test(TestKind kind, std::span<const double> sample, NullDistribution null_dist);

/// Kolmogorov distribution K(x) = P(sup|bridge| <= x).
double kolmogorov_cdf(double x);

/// Limit CDF of the (n-scaled) Cramer-von Mises statistic.
double cvm_asymptotic_cdf(double x);

/// Limit CDF of the Anderson-Darling statistic.
double ad_asymptotic_cdf(double z);

double normal_cdf(double x);

/// Quantile functions (bisection on the CDFs; exact to ~1e-12).
double normal_quantile(double p);
double kolmogorov_quantile(double p);
double exponential_quantile(double p);

} // namespace ppgof
