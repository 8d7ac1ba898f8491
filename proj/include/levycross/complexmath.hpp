#pragma once

#include <complex>

namespace levycross {

using Complex = std::complex<double>;

/// Principal logarithm, Im in (-pi, pi], with the cut (-inf, 0] rejected.
Complex principal_log(Complex z);

/// z^nu = exp(nu * Log z) on the principal branch. Throws domain_error when
/// z lies on the cut (-inf, 0] or nu is not finite.
Complex principal_power(Complex z, double nu);

/// Branch-continuous log of Gamma(z) on C \ (-inf, 0]. Lanczos (g = 7, nine
/// coefficients) for Re z >= 0.5, upward recurrence otherwise. Accurate to
/// >= 12 significant digits for |Im z| <= 200, Re z in [-50, 50].
/// Throws pole_error at nonpositive integers.
Complex log_gamma(Complex z);

/// Gamma(z) = exp(log_gamma(z)). Throws overflow_error when exp would
/// overflow; the message preserves the log value.
Complex gamma_fn(Complex z);

} // namespace levycross
