#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>

#include "levycross/density.hpp"
#include "levycross/martingale.hpp"
#include "levycross/models.hpp"
#include "levycross/payoff.hpp"

namespace levycross {

struct SpreadContract {
    Eigen::VectorXd spot; // S_{0,j} > 0
    double strike = 0.0;  // K > 0
    double maturity = 0.0;
    double rate = 0.0;

    int dim() const { return static_cast<int>(spot.size()); }
    void validate() const;
    Eigen::VectorXd log_moneyness() const; // d_j = ln(S_{0,j} / K)
};

struct BoundComponents {
    double tail_bound = 0.0;  // L_eps (exp(-P b) + (ln R)^{sum 1/p - 1} / R), discounted
    double trunc_bound = 0.0; // exterior payoff mass exp((P/2) max{-eps_j, 1 + sum eps}), discounted
};

struct PricingResult {
    double value = 0.0;
    double imag_residue = 0.0;
    std::size_t lattice_size = 0;
    BoundComponents bounds;
};

enum class EmmPolicy { AutoAdjust, Strict };

struct PricingOptions {
    EmmPolicy emm = EmmPolicy::AutoAdjust;
    int threads = 1;
};

/// Pricing series over the truncated lattice:
/// V = (K exp(-rT - <d, eps>) / P^n) sum_m Phi^Q(-(2 pi / P) m + i eps, T)
///     exp(-(2 pi i / P) <m, d>) g_m, with g_m the payoff gamma ratio.
/// Terms are evaluated in parallel and summed serially in decreasing
/// magnitude with compensation, so the value is thread-count independent.
PricingResult price_spread(const SpreadContract& contract, const BasketModel& model,
                           const LatticeSpec& spec, std::optional<DampingVector> eps = {},
                           const PricingOptions& options = {});

double black_scholes_call(double S0, double K, double T, double r, double sigma);

/// Exchange option (K = 0 spread) on two lognormal legs with composite
/// volatility sqrt(sigma1^2 + sigma2^2 - 2 rho sigma1 sigma2).
double margrabe_exchange(double S01, double S02, double T, double sigma1, double sigma2,
                         double rho, double q1 = 0.0, double q2 = 0.0);

struct GbmParams {
    Eigen::VectorXd sigma;
    Eigen::MatrixXd correlation;
};

/// Extract GBM parameters from a pure-Gaussian uncoupled basket; throws
/// unsupported_error otherwise.
GbmParams gbm_from_model(const BasketModel& model);

struct McResult {
    double mean = 0.0;
    double std_error = 0.0;
};

/// Discounted payoff mean and standard error over correlated geometric
/// Brownian paths. Fixed seed gives bit-identical results under the serial
/// accumulation used here.
McResult monte_carlo_oracle(const SpreadContract& contract, const GbmParams& gbm,
                            std::int64_t paths, std::uint64_t seed);

/// Tensor-grid quadrature (n <= 2) of eval_density x payoff over (P/2) Q_n
/// shifted by d; the approximant carries the damping shift so the payoff
/// growth is compensated inside the box.
double quadrature_price_oracle(const SpreadContract& contract, const BasketModel& model,
                               const LatticeSpec& spec, int points_per_axis = 601);

/// Auto grid for a contract: balance-rule choice from auto_grid plus the
/// model-derived per-axis weights.
LatticeSpec auto_lattice(const SpreadContract& contract, const BasketModel& model,
                         const DampingVector& eps, double eps_target,
                         std::optional<double> C_override = {}, int refine_level = 0);

} // namespace levycross
