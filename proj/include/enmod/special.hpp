#pragma once

namespace enmod {

/// log I_nu(x) for integer order nu >= 0 and x >= 0, without overflow.
/// Orders above 50 use the uniform (Debye) large-order expansion.
double log_bessel_i(int nu, double x);

/// Debye expansion of log I_nu(x), exposed for cross-checking.
double log_bessel_i_debye(double nu, double x);

/// Log density of a noncentral chi-square with k degrees of freedom and
/// noncentrality lambda (lambda = 0 gives the central law). k must be even.
double log_noncentral_chi2_pdf(double x, int k, double lambda);

}  // namespace enmod
