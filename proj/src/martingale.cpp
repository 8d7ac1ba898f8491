#include "levycross/martingale.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "levycross/errors.hpp"

namespace levycross {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Complex psi_at_minus_i_e(const BasketModel& model, int s) {
    Eigen::VectorXcd z = Eigen::VectorXcd::Zero(model.dim());
    z(s) = Complex(0.0, -1.0);
    try {
        return multivariate_exponent(z, model);
    } catch (const domain_error& e) {
        std::ostringstream os;
        os << "emm: -i e_" << s << " is outside the analyticity domain (" << e.what() << ")";
        throw domain_error(os.str());
    }
}

double psi_on_imag_axis(const LevyExponentSpec& spec, double theta) {
    Complex v = exponent(Complex(0.0, -theta), spec);
    return v.real();
}

} // namespace

BasketModel emm_drift_adjust(const BasketModel& model, const Eigen::VectorXd& rates) {
    const int n = model.dim();
    if (rates.size() != n) throw config_error("emm_drift_adjust: rate vector dimension mismatch");
    BasketModel adjusted = model;
    for (int s = 0; s < n; ++s) {
        Complex psi = psi_at_minus_i_e(model, s);
        if (std::abs(psi.imag()) > 1e-9 * (1.0 + std::abs(psi.real()))) {
            std::ostringstream os;
            os << "emm: psi(-i e_" << s << ") has nonreal value (" << psi.real() << ", "
               << psi.imag() << ")";
            throw domain_error(os.str());
        }
        double delta = rates(s) + psi.real();
        // Keep already-adjusted drifts bit-identical (idempotence).
        if (std::abs(delta) > 1e-13 * (1.0 + std::abs(rates(s)) + std::abs(model.diag[s].mu)))
            adjusted.diag[s].mu = model.diag[s].mu + delta;
    }
    return adjusted;
}

BasketModel emm_drift_adjust(const BasketModel& model, double r) {
    return emm_drift_adjust(model, Eigen::VectorXd::Constant(model.dim(), r));
}

double emm_residual(const BasketModel& model, double r, double T) {
    double target = std::exp(r * T);
    double worst = 0.0;
    for (int s = 0; s < model.dim(); ++s) {
        Eigen::VectorXcd z = Eigen::VectorXcd::Zero(model.dim());
        z(s) = Complex(0.0, -1.0);
        Complex phi = characteristic_function(z, T, model);
        worst = std::max(worst, std::abs(phi - target) / target);
    }
    return worst;
}

bool is_emm_adjusted(const BasketModel& model, double r, double T, double tol) {
    try {
        return emm_residual(model, r, T) < tol;
    } catch (const domain_error&) {
        return false;
    }
}

EsscherSolution esscher_theta(const LevyExponentSpec& spec, double r) {
    spec.validate();
    // Both -i theta and -i (theta + 1) must be valid arguments:
    // theta in (-lambda_+, -lambda_- - 1) for strip-limited exponents.
    double lo = -spec.strip_upper();
    double hi = -spec.strip_lower() - 1.0;
    auto f = [&](double theta) {
        return r + psi_on_imag_axis(spec, theta + 1.0) - psi_on_imag_axis(spec, theta);
    };

    if (!std::isfinite(lo) || !std::isfinite(hi)) {
        // Entire exponent: expand a bracket geometrically around 0.
        double w = 1.0;
        lo = -w;
        hi = w;
        for (int it = 0; it < 60 && f(lo) * f(hi) > 0.0; ++it) {
            w *= 2.0;
            lo = -w;
            hi = w;
        }
    } else {
        if (!(lo < hi)) {
            std::ostringstream os;
            os << "esscher: empty feasible interval (" << lo << ", " << hi << ")";
            throw no_solution_error(os.str());
        }
        double width = hi - lo;
        lo += 1e-9 * width;
        hi -= 1e-9 * width;
        // 64 sample points, geometrically denser toward the endpoints where
        // psi varies fastest; keep the first bracketing pair.
        std::vector<double> pts;
        pts.push_back(lo);
        const int half = 32;
        const double g = 1.25;
        double scale = (std::pow(g, half) - 1.0);
        for (int k = half - 1; k >= 1; --k)
            pts.push_back(lo + 0.5 * width * (std::pow(g, half - k) - 1.0) / scale);
        for (int k = 1; k < half; ++k)
            pts.push_back(hi - 0.5 * width * (std::pow(g, half - k) - 1.0) / scale);
        pts.push_back(hi);
        double prev_t = pts.front(), prev_f = f(prev_t);
        double fmin = prev_f, fmax = prev_f;
        bool found = false;
        for (std::size_t k = 1; k < pts.size(); ++k) {
            double t = pts[k], ft = f(t);
            fmin = std::min(fmin, ft);
            fmax = std::max(fmax, ft);
            if (prev_f == 0.0 || prev_f * ft <= 0.0) {
                lo = prev_t;
                hi = t;
                found = true;
                break;
            }
            prev_t = t;
            prev_f = ft;
        }
        if (!found) {
            std::ostringstream os;
            os << "esscher: no sign change in the feasible bracket; scanned residuals in ["
               << fmin << ", " << fmax << "]";
            throw no_solution_error(os.str());
        }
    }

    if (f(lo) * f(hi) > 0.0) {
        std::ostringstream os;
        os << "esscher: no sign change; f(" << lo << ") = " << f(lo) << ", f(" << hi
           << ") = " << f(hi);
        throw no_solution_error(os.str());
    }
    double flo = f(lo);
    EsscherSolution sol;
    while (hi - lo > 1e-12) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm == 0.0) {
            lo = hi = mid;
            sol.bracket_widths.push_back(0.0);
            break;
        }
        if (flo * fm < 0.0) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
        sol.bracket_widths.push_back(hi - lo);
    }
    sol.theta = 0.5 * (lo + hi);
    sol.residual = f(sol.theta);
    if (std::abs(sol.residual) > 1e-10) {
        std::ostringstream os;
        os << "esscher: residual " << sol.residual << " above tolerance at theta = " << sol.theta;
        throw no_solution_error(os.str());
    }
    return sol;
}

} // namespace levycross
