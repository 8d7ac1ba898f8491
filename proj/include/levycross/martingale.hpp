#pragma once

#include <Eigen/Dense>
#include <vector>

#include "levycross/models.hpp"

namespace levycross {

struct EsscherSolution {
    double theta = 0.0;
    double residual = 0.0;
    // Bracket width after each bisection step; halves monotonically until
    // the 1e-12 stopping width.
    std::vector<double> bracket_widths;
};

/// Re-set the diagonal drifts so that psi^Q(-i e_s) = -r_s for every s,
/// holding all other parameters fixed. psi is affine in mu_s with unit
/// coefficient, so the solve is linear and idempotent:
/// mu_s <- mu_s + (r_s + psi_current(-i e_s)).
/// Throws domain_error naming the component when -i e_s is outside the
/// analyticity domain.
BasketModel emm_drift_adjust(const BasketModel& model, const Eigen::VectorXd& rates);
BasketModel emm_drift_adjust(const BasketModel& model, double r);

/// max_s |Phi(-i e_s, T) - e^{rT}| / e^{rT}.
double emm_residual(const BasketModel& model, double r, double T);

bool is_emm_adjusted(const BasketModel& model, double r, double T = 1.0, double tol = 1e-9);

/// Solve r + psi(-i(theta + 1)) - psi(-i theta) = 0 for the Esscher
/// parameter of a one-dimensional exponent: bracket scan followed by
/// bisection to width 1e-12. Throws no_solution_error (with the scanned
/// range of values) when no sign change exists in the feasible interval.
EsscherSolution esscher_theta(const LevyExponentSpec& spec, double r);

} // namespace levycross
