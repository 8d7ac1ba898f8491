#include "levycross/pricer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <vector>

#include "levycross/errors.hpp"
#include "levycross/log.hpp"
#include "levycross/parallel.hpp"

namespace levycross {

namespace {

constexpr double kTwoPi = 2.0 * 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Kahan-compensated serial sum of complex terms in the given order.
Complex compensated_sum(const Eigen::VectorXcd& terms, const std::vector<std::size_t>& order) {
    Complex sum(0.0, 0.0), comp(0.0, 0.0);
    for (std::size_t idx : order) {
        Complex y = terms(static_cast<Eigen::Index>(idx)) - comp;
        Complex t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

} // namespace

void SpreadContract::validate() const {
    if (dim() < 1) throw config_error("contract: needs at least one leg");
    if ((spot.array() <= 0.0).any()) throw config_error("contract: spot prices must be positive");
    if (!(strike > 0.0)) throw config_error("contract: strike must be positive");
    if (!(maturity > 0.0)) throw config_error("contract: maturity must be positive");
    if (!std::isfinite(rate)) throw config_error("contract: rate must be finite");
}

Eigen::VectorXd SpreadContract::log_moneyness() const {
    return (spot.array() / strike).log().matrix();
}

PricingResult price_spread(const SpreadContract& contract, const BasketModel& model,
                           const LatticeSpec& spec, std::optional<DampingVector> eps,
                           const PricingOptions& options) {
    contract.validate();
    const int n = model.dim();
    if (contract.dim() != n) throw config_error("price_spread: contract/model dimension mismatch");
    if (spec.dim() != n) throw config_error("price_spread: lattice/model dimension mismatch");

    BasketModel priced = model;
    double residual = emm_residual(model, contract.rate, contract.maturity);
    if (residual > 1e-9) {
        if (options.emm == EmmPolicy::Strict) {
            std::ostringstream os;
            os << "price_spread: model is not risk-neutral (EMM residual " << residual
               << "); adjust drifts or use the auto-adjust policy";
            throw domain_error(os.str());
        }
        log::warn("price_spread: auto-adjusting drifts to the martingale condition");
        priced = emm_drift_adjust(model, contract.rate);
    }

    DampingVector damping = eps ? *eps : default_damping(priced);
    damping.validate_for(priced);

    const Eigen::VectorXd d = contract.log_moneyness();
    const double T = contract.maturity;
    std::vector<Eigen::VectorXi> points = cross_lattice(spec);
    const std::size_t count = points.size();

    Eigen::VectorXcd terms(static_cast<Eigen::Index>(count));
    std::exception_ptr failure;
    std::mutex failure_mu;
    parallel_for(count, options.threads, [&](std::size_t i) {
        try {
            Eigen::VectorXcd z(n);
            double phase = 0.0;
            for (int s = 0; s < n; ++s) {
                z(s) = Complex(-kTwoPi * points[i](s) / spec.P, damping.eps(s));
                phase += points[i](s) * d(s);
            }
            Complex phi = characteristic_function(z, T, priced);
            Complex g = payoff_coefficient(points[i], damping, spec.P);
            terms(static_cast<Eigen::Index>(i)) =
                phi * std::exp(Complex(0.0, -kTwoPi * phase / spec.P)) * g;
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mu);
            if (!failure) failure = std::current_exception();
        }
    });
    if (failure) std::rethrow_exception(failure);

    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        double ma = std::abs(terms(static_cast<Eigen::Index>(a)));
        double mb = std::abs(terms(static_cast<Eigen::Index>(b)));
        if (ma != mb) return ma > mb;
        return a < b;
    });
    Complex sum = compensated_sum(terms, order);
    double prefactor = contract.strike *
                       std::exp(-contract.rate * T - d.dot(damping.eps)) /
                       std::pow(spec.P, n);
    Complex value = prefactor * sum;

    PricingResult out;
    out.value = value.real();
    out.imag_residue = std::abs(value.imag());
    out.lattice_size = count;

    // Error-term diagnostics; reported, never asserted.
    double l1 = payoff_l1_constant(damping);
    double discount = contract.strike * std::exp(-contract.rate * T);
    double b = kInf;
    for (int s = 0; s < n; ++s) {
        b = std::min(b, -priced.strip_lower()(s));
        b = std::min(b, priced.strip_upper()(s));
    }
    double alias = std::isfinite(b) ? std::exp(-spec.P * b) : 0.0;
    double inv_sum = 0.0;
    for (const auto& w : spec.weights) inv_sum += 1.0 / w.power;
    double lnR = spec.box ? 0.0 : spec.log_R();
    double trunc = spec.box ? 0.0 : std::pow(lnR, inv_sum - 1.0) * std::exp(-lnR);
    out.bounds.tail_bound = discount * l1 * (alias + trunc);
    double exterior = 1.0 + damping.eps.sum();
    for (int j = 1; j < n; ++j) exterior = std::max(exterior, -damping.eps(j));
    out.bounds.trunc_bound = discount * std::exp(0.5 * spec.P * exterior);
    return out;
}

double black_scholes_call(double S0, double K, double T, double r, double sigma) {
    if (!(sigma > 0.0)) throw domain_error("black_scholes_call: sigma must be positive");
    if (!(T > 0.0)) throw domain_error("black_scholes_call: T must be positive");
    if (!(S0 > 0.0) || !(K > 0.0)) throw domain_error("black_scholes_call: S0, K must be positive");
    double sq = sigma * std::sqrt(T);
    double b1 = (std::log(S0 / K) + (r + 0.5 * sigma * sigma) * T) / sq;
    double b2 = b1 - sq;
    return S0 * normal_cdf(b1) - K * std::exp(-r * T) * normal_cdf(b2);
}

double margrabe_exchange(double S01, double S02, double T, double sigma1, double sigma2,
                         double rho, double q1, double q2) {
    if (!(S01 > 0.0) || !(S02 > 0.0)) throw domain_error("margrabe: spots must be positive");
    if (!(T > 0.0)) throw domain_error("margrabe: T must be positive");
    if (sigma1 < 0.0 || sigma2 < 0.0 || std::abs(rho) > 1.0)
        throw domain_error("margrabe: invalid volatility parameters");
    double var = sigma1 * sigma1 + sigma2 * sigma2 - 2.0 * rho * sigma1 * sigma2;
    double sig = std::sqrt(std::max(var, 0.0));
    double a = S01 * std::exp(-q1 * T);
    double b = S02 * std::exp(-q2 * T);
    if (sig * std::sqrt(T) < 1e-14) return std::max(a - b, 0.0);
    double sq = sig * std::sqrt(T);
    double d1 = (std::log(S01 / S02) + (q2 - q1 + 0.5 * var) * T) / sq;
    double d2 = d1 - sq;
    return a * normal_cdf(d1) - b * normal_cdf(d2);
}

GbmParams gbm_from_model(const BasketModel& model) {
    const int n = model.dim();
    for (const auto& comp : model.diag)
        if (comp.kind != ExponentKind::Gaussian)
            throw unsupported_error("monte carlo oracle: model is not geometric Brownian (non-Gaussian leg)");
    if (model.has_coupling() && model.B.cwiseAbs().sum() != 0.0)
        throw unsupported_error("monte carlo oracle: coupled baskets are not geometric Brownian");
    GbmParams g;
    g.sigma.resize(n);
    for (int s = 0; s < n; ++s) g.sigma(s) = model.diag[s].sigma;
    g.correlation = Eigen::MatrixXd::Identity(n, n);
    return g;
}

McResult monte_carlo_oracle(const SpreadContract& contract, const GbmParams& gbm,
                            std::int64_t paths, std::uint64_t seed) {
    contract.validate();
    const int n = contract.dim();
    if (gbm.sigma.size() != n || gbm.correlation.rows() != n || gbm.correlation.cols() != n)
        throw config_error("monte_carlo_oracle: parameter dimensions mismatch");
    if ((gbm.sigma.array() < 0.0).any())
        throw config_error("monte_carlo_oracle: volatilities must be nonnegative");
    if (paths < 2) throw config_error("monte_carlo_oracle: needs at least 2 paths");

    // Correlation factor; fall back to a clipped spectral root for
    // semi-definite matrices (|rho| = 1).
    Eigen::MatrixXd L;
    Eigen::LLT<Eigen::MatrixXd> llt(gbm.correlation);
    if (llt.info() == Eigen::Success) {
        L = llt.matrixL();
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gbm.correlation);
        if (es.info() != Eigen::Success) throw domain_error("monte_carlo_oracle: bad correlation matrix");
        Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
        L = es.eigenvectors() * ev.asDiagonal();
    }

    const double T = contract.maturity;
    const double r = contract.rate;
    const double disc = std::exp(-r * T);
    Eigen::VectorXd drift(n), vol(n);
    for (int s = 0; s < n; ++s) {
        drift(s) = (r - 0.5 * gbm.sigma(s) * gbm.sigma(s)) * T;
        vol(s) = gbm.sigma(s) * std::sqrt(T);
    }

    std::mt19937_64 rng(seed);
    // Box-Muller on explicit 53-bit uniforms keeps the stream
    // implementation-independent.
    auto uniform = [&rng]() { return ((rng() >> 11) + 0.5) * (1.0 / 9007199254740992.0); };
    bool have_spare = false;
    double spare = 0.0;
    auto normal = [&]() {
        if (have_spare) {
            have_spare = false;
            return spare;
        }
        double u1 = uniform(), u2 = uniform();
        double rad = std::sqrt(-2.0 * std::log(u1));
        double ang = kTwoPi * u2;
        spare = rad * std::sin(ang);
        have_spare = true;
        return rad * std::cos(ang);
    };

    double sum = 0.0, comp = 0.0, sumsq = 0.0, compsq = 0.0;
    Eigen::VectorXd z(n), g(n);
    for (std::int64_t p = 0; p < paths; ++p) {
        for (int s = 0; s < n; ++s) g(s) = normal();
        z.noalias() = L * g;
        double lead = contract.spot(0) * std::exp(drift(0) + vol(0) * z(0));
        double rest = 0.0;
        for (int s = 1; s < n; ++s) rest += contract.spot(s) * std::exp(drift(s) + vol(s) * z(s));
        double pay = disc * std::max(lead - rest - contract.strike, 0.0);
        double y = pay - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        double y2 = pay * pay - compsq;
        double t2 = sumsq + y2;
        compsq = (t2 - sumsq) - y2;
        sumsq = t2;
    }
    McResult out;
    const double np = static_cast<double>(paths);
    out.mean = sum / np;
    double var = std::max(0.0, (sumsq - np * out.mean * out.mean) / (np - 1.0));
    out.std_error = std::sqrt(var / np);
    return out;
}

double quadrature_price_oracle(const SpreadContract& contract, const BasketModel& model,
                               const LatticeSpec& spec, int points_per_axis) {
    contract.validate();
    const int n = model.dim();
    if (n > 2) throw unsupported_error("quadrature_price_oracle: n <= 2 only (cost)");
    if (points_per_axis < 9) throw config_error("quadrature_price_oracle: grid too coarse");
    int N = points_per_axis | 1; // Simpson needs an odd count

    BasketModel priced = model;
    if (emm_residual(model, contract.rate, contract.maturity) > 1e-9)
        priced = emm_drift_adjust(model, contract.rate);
    DampingVector damping = default_damping(priced);
    DensityApproximant approx = build_density(priced, spec, damping.eps);

    const Eigen::VectorXd d = contract.log_moneyness();
    const double half = 0.5 * spec.P;
    Eigen::VectorXd xs(N), w(N);
    double h = 2.0 * half / (N - 1);
    for (int i = 0; i < N; ++i) {
        xs(i) = -half + i * h;
        w(i) = (i == 0 || i == N - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    }
    w *= h / 3.0;

    double integral = 0.0;
    if (n == 1) {
        for (int i = 0; i < N; ++i) {
            double pay = std::max(std::exp(xs(i) + d(0)) - 1.0, 0.0);
            if (pay == 0.0) continue;
            Eigen::VectorXd x(1);
            x(0) = xs(i);
            integral += w(i) * pay * eval_density(approx, x).value;
        }
    } else {
        Eigen::MatrixXd dens = eval_density_grid(approx, xs, xs);
        for (int i = 0; i < N; ++i) {
            double e1 = std::exp(xs(i) + d(0));
            for (int j = 0; j < N; ++j) {
                double pay = e1 - std::exp(xs(j) + d(1)) - 1.0;
                if (pay <= 0.0) continue;
                integral += w(i) * w(j) * pay * dens(i, j);
            }
        }
    }
    return contract.strike * std::exp(-contract.rate * contract.maturity) * integral;
}

LatticeSpec auto_lattice(const SpreadContract& contract, const BasketModel& model,
                         const DampingVector& eps, double eps_target,
                         std::optional<double> C_override, int refine_level) {
    GridChoice g = auto_grid(model, contract.maturity, contract.log_moneyness(),
                             eps.eps, eps_target, refine_level);
    return LatticeSpec::for_model(g.P, g.R, model, contract.maturity, C_override);
}

} // namespace levycross
