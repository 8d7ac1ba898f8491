#pragma once

#include <Eigen/Dense>
#include <vector>

#include "levycross/complexmath.hpp"

namespace levycross {

enum class ExponentKind { KoBoL, VarianceGamma, NormalInverseGaussian, Gaussian };

const char* kind_name(ExponentKind kind);

// Parametric description of a one-dimensional characteristic exponent,
// psi with E[exp(i xi X_t)] = exp(-t psi(xi)), together with its
// analyticity strip.
struct LevyExponentSpec {
    ExponentKind kind = ExponentKind::Gaussian;
    double mu = 0.0;
    // KoBoL / VarianceGamma
    double c_plus = 0.0;
    double c_minus = 0.0;
    double lambda_minus = 0.0; // < 0
    double lambda_plus = 0.0;  // > 0
    double nu = 0.0;           // KoBoL order; NIG exponent nu (classical NIG: 1)
    // NormalInverseGaussian
    double alpha = 0.0;
    double beta = 0.0;
    double delta = 0.0;
    // Gaussian
    double sigma = 0.0;

    static LevyExponentSpec kobol(double nu, double c_plus, double c_minus,
                                  double lambda_minus, double lambda_plus, double mu = 0.0);
    static LevyExponentSpec variance_gamma(double c_plus, double c_minus,
                                           double lambda_minus, double lambda_plus, double mu = 0.0);
    static LevyExponentSpec nig(double alpha, double beta, double delta,
                                double nu = 1.0, double mu = 0.0);
    static LevyExponentSpec gaussian(double sigma, double mu = 0.0);

    void validate() const; // throws config_error on parameter violations

    // Analyticity strip of psi in Im xi; (-inf, inf) for Gaussian.
    double strip_lower() const;
    double strip_upper() const;
};

Complex kobol_exponent(Complex xi, const LevyExponentSpec& spec);
Complex vg_exponent(Complex xi, const LevyExponentSpec& spec);
Complex nig_exponent(Complex xi, const LevyExponentSpec& spec);
Complex gaussian_exponent(Complex xi, const LevyExponentSpec& spec);

/// Dispatch on spec.kind.
Complex exponent(Complex xi, const LevyExponentSpec& spec);

// Coupled system U_t = X_t + B Z_t: n diagonal exponents psi_s^(1), n
// coupling exponents psi_m^(2) and a nonnegative matrix B. Strip bounds
// b_-, b_+ per component are derived on construction from the margin
// kappa = strip_margin * lambda and the column sums of B.
class BasketModel {
public:
    std::vector<LevyExponentSpec> diag;
    std::vector<LevyExponentSpec> coupling; // empty = no coupling terms
    Eigen::MatrixXd B;                      // n x n, entries >= 0 (0 x 0 when no coupling)
    double strip_margin = 0.95;

    BasketModel() = default;
    BasketModel(std::vector<LevyExponentSpec> diag_, std::vector<LevyExponentSpec> coupling_,
                Eigen::MatrixXd B_, double strip_margin_ = 0.95);

    int dim() const { return static_cast<int>(diag.size()); }
    bool has_coupling() const { return !coupling.empty(); }
    const Eigen::VectorXd& strip_lower() const { return b_lo_; }
    const Eigen::VectorXd& strip_upper() const { return b_hi_; }

    void validate() const;

private:
    Eigen::VectorXd b_lo_, b_hi_;
    void derive_strips();
};

/// psi(z) = sum_s psi_s^(1)(z_s) + sum_m psi_m^(2)(sum_k B(k,m) z_k).
/// Requires Im z_s in [b_-(s), b_+(s)]; violations name the offending index.
Complex multivariate_exponent(const Eigen::VectorXcd& z, const BasketModel& model);

/// Phi(z, t) = exp(-t psi(z)).
Complex characteristic_function(const Eigen::VectorXcd& z, double t, const BasketModel& model);

/// Per-component lattice decay constant: KoBoL components use the weaker of
/// the two asymptotes, 2 c (-Gamma(-nu)) cos(pi nu / 2) min{1, cos(nu pi)}
/// with c = min(c_plus, c_minus); Gaussian components are exact with
/// sigma^2 / 2 (power-2 weight). Other kinds are unsupported without an
/// explicit override.
double component_decay_constant(const LevyExponentSpec& spec);

/// Aggregate constant: min over the diagonal components. Coupling-term decay
/// is ignored (conservative; the lattice only grows).
double decay_constant(const BasketModel& model);

struct AxisMoments {
    Eigen::VectorXd mean;
    Eigen::VectorXd variance;
};

/// Per-axis mean and variance of U_{s,t}, by central differences of psi at 0
/// (step 1e-4). Used to size the spatial box.
AxisMoments axis_moments(const BasketModel& model, double t);

} // namespace levycross
