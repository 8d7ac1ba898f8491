#pragma once

#include <Eigen/Dense>

#include "levycross/complexmath.hpp"
#include "levycross/models.hpp"

namespace levycross {

// Contour shift making exp(<x, eps>) H(x) integrable for the spread payoff
// H(x) = (e^{x_1} - sum_{j>=2} e^{x_j} - 1)_+: eps_j > 0 for j >= 2 and
// eps_1 < -1 - sum_{j>=2} eps_j. n = 1 is admitted with eps_1 < -1.
struct DampingVector {
    Eigen::VectorXd eps;

    int dim() const { return static_cast<int>(eps.size()); }
    void validate() const;
    void validate_for(const BasketModel& model) const; // adds the strip constraints
};

/// eps_j = min(0.75, 0.9 b_+(j)) for j >= 2; eps_1 = max(0.9 b_-(1),
/// -1 - sum eps_j - 1). Throws adaptedness_error when the strips are too
/// narrow to damp the payoff's e^{x_1} growth.
DampingVector default_damping(const BasketModel& model);

/// Spread payoff transform g(u) = Gamma(i sum u_m - 1) prod_{m>=2}
/// Gamma(-i u_m) / Gamma(i u_1 + 1), computed via log-gamma differences.
/// n = 1 takes the empty product. Throws pole_error near gamma poles.
Complex hurd_zhou_g(const Eigen::VectorXcd& u);

/// Fourier coefficient of the damped payoff at lattice point m:
/// hurd_zhou_g(-(2 pi / P) m + i eps).
Complex payoff_coefficient(const Eigen::VectorXi& m, const DampingVector& eps, double P);

/// L_eps = ||H(y) exp(<y, eps>)||_{L1}, the m = 0 coefficient; real positive.
double payoff_l1_constant(const DampingVector& eps);

} // namespace levycross
