#include "levycross/models.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "levycross/errors.hpp"

namespace levycross {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;

void check_strip(Complex xi, double lo, double hi, const char* who) {
    double y = xi.imag();
    if (!(y > lo && y < hi)) {
        std::ostringstream os;
        os << who << ": Im xi = " << y << " outside the open strip (" << lo << ", " << hi << ")";
        throw domain_error(os.str());
    }
}

bool zero_column(const Eigen::MatrixXd& B, int m) {
    return B.col(m).cwiseAbs().sum() == 0.0;
}

} // namespace

const char* kind_name(ExponentKind kind) {
    switch (kind) {
        case ExponentKind::KoBoL: return "kobol";
        case ExponentKind::VarianceGamma: return "vg";
        case ExponentKind::NormalInverseGaussian: return "nig";
        case ExponentKind::Gaussian: return "gaussian";
    }
    return "?";
}

LevyExponentSpec LevyExponentSpec::kobol(double nu, double c_plus, double c_minus,
                                         double lambda_minus, double lambda_plus, double mu) {
    LevyExponentSpec s;
    s.kind = ExponentKind::KoBoL;
    s.nu = nu;
    s.c_plus = c_plus;
    s.c_minus = c_minus;
    s.lambda_minus = lambda_minus;
    s.lambda_plus = lambda_plus;
    s.mu = mu;
    s.validate();
    return s;
}

LevyExponentSpec LevyExponentSpec::variance_gamma(double c_plus, double c_minus,
                                                  double lambda_minus, double lambda_plus, double mu) {
    LevyExponentSpec s;
    s.kind = ExponentKind::VarianceGamma;
    s.c_plus = c_plus;
    s.c_minus = c_minus;
    s.lambda_minus = lambda_minus;
    s.lambda_plus = lambda_plus;
    s.mu = mu;
    s.validate();
    return s;
}

LevyExponentSpec LevyExponentSpec::nig(double alpha, double beta, double delta,
                                       double nu, double mu) {
    LevyExponentSpec s;
    s.kind = ExponentKind::NormalInverseGaussian;
    s.alpha = alpha;
    s.beta = beta;
    s.delta = delta;
    s.nu = nu;
    s.mu = mu;
    s.validate();
    return s;
}

LevyExponentSpec LevyExponentSpec::gaussian(double sigma, double mu) {
    LevyExponentSpec s;
    s.kind = ExponentKind::Gaussian;
    s.sigma = sigma;
    s.mu = mu;
    s.validate();
    return s;
}

void LevyExponentSpec::validate() const {
    if (!std::isfinite(mu)) throw config_error("exponent spec: mu must be finite");
    switch (kind) {
        case ExponentKind::KoBoL:
            if (nu == 0.0 || nu == 1.0)
                throw unsupported_error("kobol: nu in {0, 1} log cases are not implemented");
            if (!(nu > 0.0 && nu < 1.0))
                throw config_error("kobol: nu must be in (0, 1)");
            [[fallthrough]];
        case ExponentKind::VarianceGamma:
            if (!(c_plus > 0.0) || !(c_minus > 0.0))
                throw config_error("kobol/vg: intensities c_plus, c_minus must be positive");
            if (!(lambda_minus < 0.0) || !(lambda_plus > 0.0))
                throw config_error("kobol/vg: requires lambda_minus < 0 < lambda_plus");
            break;
        case ExponentKind::NormalInverseGaussian:
            if (!(alpha > std::abs(beta)))
                throw config_error("nig: requires alpha > |beta|");
            if (!(delta >= 0.0)) throw config_error("nig: delta must be >= 0");
            if (!(nu > 0.0 && nu <= 2.0)) throw config_error("nig: nu must be in (0, 2]");
            break;
        case ExponentKind::Gaussian:
            if (!(sigma > 0.0)) throw config_error("gaussian: sigma must be positive");
            break;
    }
}

double LevyExponentSpec::strip_lower() const {
    switch (kind) {
        case ExponentKind::KoBoL:
        case ExponentKind::VarianceGamma: return lambda_minus;
        case ExponentKind::NormalInverseGaussian: return beta - alpha;
        case ExponentKind::Gaussian: return -kInf;
    }
    return -kInf;
}

double LevyExponentSpec::strip_upper() const {
    switch (kind) {
        case ExponentKind::KoBoL:
        case ExponentKind::VarianceGamma: return lambda_plus;
        case ExponentKind::NormalInverseGaussian: return beta + alpha;
        case ExponentKind::Gaussian: return kInf;
    }
    return kInf;
}

Complex kobol_exponent(Complex xi, const LevyExponentSpec& spec) {
    if (spec.kind != ExponentKind::KoBoL) throw domain_error("kobol_exponent: wrong kind");
    if (spec.nu == 0.0 || spec.nu == 1.0)
        throw unsupported_error("kobol_exponent: nu in {0, 1} not implemented");
    check_strip(xi, spec.lambda_minus, spec.lambda_plus, "kobol_exponent");
    const Complex i(0.0, 1.0);
    double g = std::tgamma(-spec.nu); // real, negative for nu in (0, 1)
    Complex minus_side =
        spec.c_minus * g *
        (std::pow(-spec.lambda_minus, spec.nu) - principal_power(Complex(-spec.lambda_minus, 0.0) - i * xi, spec.nu));
    Complex plus_side =
        spec.c_plus * g *
        (std::pow(spec.lambda_plus, spec.nu) - principal_power(Complex(spec.lambda_plus, 0.0) + i * xi, spec.nu));
    return -i * spec.mu * xi + minus_side + plus_side;
}

Complex vg_exponent(Complex xi, const LevyExponentSpec& spec) {
    if (spec.kind != ExponentKind::VarianceGamma) throw domain_error("vg_exponent: wrong kind");
    check_strip(xi, spec.lambda_minus, spec.lambda_plus, "vg_exponent");
    const Complex i(0.0, 1.0);
    Complex t1 = principal_log(Complex(-spec.lambda_minus, 0.0) - i * xi) - std::log(-spec.lambda_minus);
    Complex t2 = principal_log(Complex(spec.lambda_plus, 0.0) + i * xi) - std::log(spec.lambda_plus);
    return -i * spec.mu * xi + spec.c_plus * t1 + spec.c_minus * t2;
}

Complex nig_exponent(Complex xi, const LevyExponentSpec& spec) {
    if (spec.kind != ExponentKind::NormalInverseGaussian) throw domain_error("nig_exponent: wrong kind");
    const Complex i(0.0, 1.0);
    Complex w = Complex(spec.beta, 0.0) + i * xi;
    Complex arg = Complex(spec.alpha * spec.alpha, 0.0) - w * w;
    if (arg.imag() == 0.0 && arg.real() <= 0.0)
        throw domain_error("nig_exponent: alpha^2 - (beta + i xi)^2 on the branch cut");
    double base = std::pow(spec.alpha * spec.alpha - spec.beta * spec.beta, spec.nu / 2.0);
    return -i * spec.mu * xi + spec.delta * (principal_power(arg, spec.nu / 2.0) - base);
}

Complex gaussian_exponent(Complex xi, const LevyExponentSpec& spec) {
    if (spec.kind != ExponentKind::Gaussian) throw domain_error("gaussian_exponent: wrong kind");
    const Complex i(0.0, 1.0);
    return -i * spec.mu * xi + 0.5 * spec.sigma * spec.sigma * xi * xi;
}

Complex exponent(Complex xi, const LevyExponentSpec& spec) {
    switch (spec.kind) {
        case ExponentKind::KoBoL: return kobol_exponent(xi, spec);
        case ExponentKind::VarianceGamma: return vg_exponent(xi, spec);
        case ExponentKind::NormalInverseGaussian: return nig_exponent(xi, spec);
        case ExponentKind::Gaussian: return gaussian_exponent(xi, spec);
    }
    throw domain_error("exponent: unknown kind");
}

BasketModel::BasketModel(std::vector<LevyExponentSpec> diag_, std::vector<LevyExponentSpec> coupling_,
                         Eigen::MatrixXd B_, double strip_margin_)
    : diag(std::move(diag_)), coupling(std::move(coupling_)), B(std::move(B_)),
      strip_margin(strip_margin_) {
    validate();
    derive_strips();
}

void BasketModel::validate() const {
    const int n = dim();
    if (n < 1) throw config_error("model: needs at least one diagonal component");
    for (const auto& s : diag) s.validate();
    if (!(strip_margin > 0.0 && strip_margin < 1.0))
        throw config_error("model: strip_margin must be in (0, 1)");
    if (!coupling.empty()) {
        if (static_cast<int>(coupling.size()) != n)
            throw config_error("model: coupling must have one exponent per component");
        for (const auto& s : coupling) s.validate();
        if (B.rows() != n || B.cols() != n)
            throw config_error("model: B must be n x n when coupling is present");
        if ((B.array() < 0.0).any())
            throw config_error("model: B entries must be nonnegative (strip derivation requires b_{k,m} >= 0)");
    } else if (B.size() != 0) {
        throw config_error("model: B given without coupling exponents");
    }
}

void BasketModel::derive_strips() {
    const int n = dim();
    b_lo_.resize(n);
    b_hi_.resize(n);
    // Coupling contribution: for each column m with positive sum, every axis
    // must keep Im z within kappa'_m / colsum_m so that the coupled argument
    // sum_k B(k,m) z_k stays inside the m-th coupling strip.
    double cpl_lo = -kInf, cpl_hi = kInf;
    if (has_coupling()) {
        for (int m = 0; m < n; ++m) {
            double colsum = B.col(m).sum();
            if (colsum <= 0.0) continue;
            double klo = strip_margin * coupling[m].strip_lower();
            double khi = strip_margin * coupling[m].strip_upper();
            if (std::isfinite(klo)) cpl_lo = std::max(cpl_lo, klo / colsum);
            if (std::isfinite(khi)) cpl_hi = std::min(cpl_hi, khi / colsum);
        }
    }
    for (int s = 0; s < n; ++s) {
        double lo = strip_margin * diag[s].strip_lower();
        double hi = strip_margin * diag[s].strip_upper();
        b_lo_(s) = std::max(std::isfinite(lo) ? lo : -kInf, cpl_lo);
        b_hi_(s) = std::min(std::isfinite(hi) ? hi : kInf, cpl_hi);
        if (!(b_lo_(s) < 0.0 && b_hi_(s) > 0.0)) {
            std::ostringstream os;
            os << "model: derived strip for component " << s << " is [" << b_lo_(s) << ", "
               << b_hi_(s) << "], must contain 0 in its interior";
            throw config_error(os.str());
        }
    }
}

Complex multivariate_exponent(const Eigen::VectorXcd& z, const BasketModel& model) {
    const int n = model.dim();
    if (z.size() != n) throw domain_error("multivariate_exponent: argument dimension mismatch");
    for (int s = 0; s < n; ++s) {
        double y = z(s).imag();
        if (y < model.strip_lower()(s) - 1e-12 || y > model.strip_upper()(s) + 1e-12) {
            std::ostringstream os;
            os << "multivariate_exponent: component " << s << ": Im z = " << y
               << " outside [" << model.strip_lower()(s) << ", " << model.strip_upper()(s) << "]";
            throw domain_error(os.str());
        }
    }
    Complex acc(0.0, 0.0);
    for (int s = 0; s < n; ++s) {
        try {
            acc += exponent(z(s), model.diag[s]);
        } catch (const domain_error& e) {
            std::ostringstream os;
            os << "diagonal component " << s << ": " << e.what();
            throw domain_error(os.str());
        }
    }
    if (model.has_coupling()) {
        for (int m = 0; m < n; ++m) {
            if (zero_column(model.B, m)) continue;
            Complex arg(0.0, 0.0);
            for (int k = 0; k < n; ++k) arg += model.B(k, m) * z(k);
            try {
                acc += exponent(arg, model.coupling[m]);
            } catch (const domain_error& e) {
                std::ostringstream os;
                os << "coupling component " << m << ": " << e.what();
                throw domain_error(os.str());
            }
        }
    }
    return acc;
}

Complex characteristic_function(const Eigen::VectorXcd& z, double t, const BasketModel& model) {
    if (!(t > 0.0)) throw domain_error("characteristic_function: t must be positive");
    return std::exp(-t * multivariate_exponent(z, model));
}

double component_decay_constant(const LevyExponentSpec& spec) {
    switch (spec.kind) {
        case ExponentKind::KoBoL: {
            double c = std::min(spec.c_plus, spec.c_minus);
            double g = -std::tgamma(-spec.nu); // positive
            double v = 2.0 * c * g * std::cos(kPi * spec.nu / 2.0) *
                       std::min(1.0, std::cos(spec.nu * kPi));
            if (!(v > 0.0))
                throw domain_error("decay_constant: nonpositive constant; kobol order must be in (0, 1/2)");
            return v;
        }
        case ExponentKind::Gaussian:
            return 0.5 * spec.sigma * spec.sigma;
        default: {
            std::ostringstream os;
            os << "decay_constant: component kind '" << kind_name(spec.kind)
               << "' has no built-in constant; provide an override";
            throw config_error(os.str());
        }
    }
}

double decay_constant(const BasketModel& model) {
    double c = kInf;
    for (const auto& s : model.diag) c = std::min(c, component_decay_constant(s));
    return c;
}

AxisMoments axis_moments(const BasketModel& model, double t) {
    const int n = model.dim();
    const double h = 1e-4;
    AxisMoments mo;
    mo.mean.resize(n);
    mo.variance.resize(n);
    for (int s = 0; s < n; ++s) {
        Eigen::VectorXcd zp = Eigen::VectorXcd::Zero(n), zm = Eigen::VectorXcd::Zero(n);
        zp(s) = Complex(h, 0.0);
        zm(s) = Complex(-h, 0.0);
        Complex pp = multivariate_exponent(zp, model);
        Complex pm = multivariate_exponent(zm, model);
        Complex d1 = (pp - pm) / (2.0 * h);
        Complex d2 = (pp + pm) / (h * h);
        mo.mean(s) = -t * d1.imag();      // E U_s = i t psi'(0)
        mo.variance(s) = t * d2.real();   // var U_s = t Re psi''(0)
        if (mo.variance(s) < 0.0) mo.variance(s) = 0.0;
    }
    return mo;
}

} // namespace levycross
