#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <unordered_map>
#include <vector>

#include "levycross/models.hpp"

namespace levycross {

// Per-axis membership weight: coef * T * |2 pi m / P|^power. KoBoL-type axes
// use (C, nu_s); Gaussian axes use the exact |Phi| bound (sigma^2/2, 2).
struct AxisWeight {
    double coef = 0.0;
    double power = 0.0;
};

// Frequency-lattice description. cross mode keeps the integer points with
// sum_s w_s(m_s) <= ln R (exponential hyperbolic cross); square mode keeps
// |m_s| <= box[s] on every axis.
struct LatticeSpec {
    double P = 0.0; // period; spatial box is (P/2) Q_n
    double R = 0.0; // > 1; ln R is the cross radius
    double C = 0.0; // aggregate decay constant backing the power axes
    double T = 0.0;
    Eigen::VectorXd nu; // per-axis order (2 marks a Gaussian axis)
    std::vector<AxisWeight> weights;
    std::optional<Eigen::VectorXi> box;
    std::size_t cardinality_cap = 10'000'000;

    int dim() const { return static_cast<int>(weights.size()); }
    double log_R() const;
    void validate() const;

    static LatticeSpec cross(double P, double R, double C, const Eigen::VectorXd& nu, double T);
    static LatticeSpec square(double P, const Eigen::VectorXi& box, double T);
    /// Per-axis weights from the model: KoBoL axes share the aggregate C
    /// (or the override), Gaussian axes get the exact sigma^2/2 power-2 bound.
    static LatticeSpec for_model(double P, double R, const BasketModel& model, double T,
                                 std::optional<double> C_override = {});
};

/// All lattice points of the spec, in lexicographic order. Throws
/// budget_error when the cardinality exceeds the configured cap.
std::vector<Eigen::VectorXi> cross_lattice(const LatticeSpec& spec);

/// Volume estimate of the cross: prod_s (P/2pi)(lnR/(coef_s T))^{1/p_s}
/// times the Dirichlet volume 2^n prod Gamma(1 + 1/p_s) / Gamma(1 + sum 1/p_s).
double cross_cardinality_estimate(const LatticeSpec& spec);

struct LatticePointHash {
    std::size_t operator()(const Eigen::VectorXi& m) const noexcept;
};
struct LatticePointEq {
    bool operator()(const Eigen::VectorXi& a, const Eigen::VectorXi& b) const noexcept {
        return a.size() == b.size() && (a.array() == b.array()).all();
    }
};

// Truncated Fourier series of the periodized density. Coefficients are
// Phi^Q(-(2 pi / P) m + i shift, T) / P^n, stored in decreasing magnitude
// (the summation order used by eval).
struct DensityApproximant {
    LatticeSpec spec;
    Eigen::VectorXd shift; // zero vector when no contour shift
    std::vector<Eigen::VectorXi> points;
    Eigen::VectorXcd coeffs;
    std::unordered_map<Eigen::VectorXi, std::ptrdiff_t, LatticePointHash, LatticePointEq> index;

    Complex coefficient_at(const Eigen::VectorXi& m) const;
};

struct DensityValue {
    double value = 0.0;
    double imag_residue = 0.0;
    bool outside_box = false;
};

DensityApproximant build_density(const BasketModel& model, const LatticeSpec& spec,
                                 std::optional<Eigen::VectorXd> shift = {}, int threads = 1);

/// Re[exp(<x, shift>) sum_m c_m exp(i (2 pi / P) <m, x>)], compensated
/// accumulation in stored order; reports the imaginary residue magnitude
/// and flags x outside (P/2) Q_n.
DensityValue eval_density(const DensityApproximant& approx, const Eigen::VectorXd& x);

/// n = 2 tensor-grid evaluation (values only), row-factorized over the first
/// axis. Matches pointwise eval_density up to roundoff.
Eigen::MatrixXd eval_density_grid(const DensityApproximant& approx,
                                  const Eigen::VectorXd& xs1, const Eigen::VectorXd& xs2);

struct GridChoice {
    double P = 0.0;
    double R = 0.0;
};

/// Balance rule sizing: ln R = max(2, ln(1/eps_target)); P covers the spatial
/// mass (moment box), the strip alias term exp(-(P/2) b) and, when a damping
/// vector is supplied, the exterior payoff tail exp((P/2) max{-eps_j, 1+sum eps}).
/// refine_level scales both P and ln R geometrically (factor 1.2 per level).
GridChoice auto_grid(const BasketModel& model, double T, const Eigen::VectorXd& d,
                     const std::optional<Eigen::VectorXd>& damping_eps, double eps_target,
                     int refine_level = 0);

} // namespace levycross
