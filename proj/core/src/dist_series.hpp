#pragma once

// Truncated-series evaluations of the asymptotic null distributions used
// by the one-sample tests. These back the lookup tables in
// generated/dist_tables.inc and handle queries beyond the table range.

namespace ppgof::detail {

/// K_{1/4}(y) via the integral representation
/// int_0^inf exp(-y cosh t) cosh(t/4) dt.
double bessel_k_quarter(double y);

/// Csorgo-Faraway series for the limiting Cramer-von Mises CDF.
double cvm_cdf_series(double x);

/// Anderson-Darling limit CDF: alternating series with a quadrature
/// inner integral.
double ad_cdf_series(double z);

} // namespace ppgof::detail
