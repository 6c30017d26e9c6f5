#pragma once

namespace kmjack::stats {

double norm_pdf(double x);

// Standard normal CDF and survival function, both erfc-based so the tails
// keep full relative accuracy (no 1-Phi cancellation).
double norm_cdf(double x);
double norm_sf(double x);

// Inverse CDF / inverse survival function. Acklam's rational approximation
// refined with one Newton step against the erfc-based CDF.
double norm_ppf(double p);
double norm_isf(double q);

// Inverse Mills ratio pdf(a)/sf(a), the mean of a standard normal truncated
// below at a. Switches to the a + 1/a asymptote once the plain 1-Phi(a)
// would underflow (a > 8).
double truncated_normal_mean(double a);

// Median of a standard normal truncated below at a; asymptote a + ln(2)/a
// past the same cutoff.
double truncated_normal_median(double a);

// Regularized incomplete gamma functions P(a,x) and Q(a,x) = 1 - P(a,x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

}  // namespace kmjack::stats
