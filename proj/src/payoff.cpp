#include "levycross/payoff.hpp"

#include <cmath>
#include <sstream>

#include "levycross/errors.hpp"

namespace levycross {

namespace {

constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

void check_pole(Complex z, const char* which) {
    if (z.real() > 0.5) return;
    double nearest = std::round(z.real());
    if (nearest > 0.0) return;
    if (std::abs(z.real() - nearest) < 1e-12 && std::abs(z.imag()) < 1e-12) {
        std::ostringstream os;
        os << "hurd_zhou_g: " << which << " argument (" << z.real() << ", " << z.imag()
           << ") within 1e-12 of a gamma pole";
        throw pole_error(os.str());
    }
}

} // namespace

void DampingVector::validate() const {
    const int n = dim();
    if (n < 1) throw config_error("damping: empty vector");
    double tail = 0.0;
    for (int j = 1; j < n; ++j) {
        if (!(eps(j) > 0.0)) {
            std::ostringstream os;
            os << "damping: eps[" << j << "] = " << eps(j) << " must be positive";
            throw domain_error(os.str());
        }
        tail += eps(j);
    }
    if (!(eps(0) < -1.0 - tail)) {
        std::ostringstream os;
        os << "damping: eps[0] = " << eps(0) << " must be < " << (-1.0 - tail);
        throw domain_error(os.str());
    }
}

void DampingVector::validate_for(const BasketModel& model) const {
    validate();
    if (dim() != model.dim()) throw config_error("damping: dimension mismatch with model");
    if (eps(0) < model.strip_lower()(0)) {
        std::ostringstream os;
        os << "damping: eps[0] = " << eps(0) << " below strip bound b_-(1) = "
           << model.strip_lower()(0);
        throw domain_error(os.str());
    }
    for (int j = 1; j < dim(); ++j) {
        if (eps(j) > model.strip_upper()(j)) {
            std::ostringstream os;
            os << "damping: eps[" << j << "] = " << eps(j) << " above strip bound b_+("
               << j + 1 << ") = " << model.strip_upper()(j);
            throw domain_error(os.str());
        }
    }
}

DampingVector default_damping(const BasketModel& model) {
    const int n = model.dim();
    DampingVector d;
    d.eps.resize(n);
    double tail = 0.0;
    for (int j = 1; j < n; ++j) {
        d.eps(j) = std::min(0.75, 0.9 * model.strip_upper()(j));
        tail += d.eps(j);
    }
    double lo = 0.9 * model.strip_lower()(0);
    d.eps(0) = std::max(lo, -1.0 - tail - 1.0);
    if (!(d.eps(0) < -1.0 - tail)) {
        std::ostringstream os;
        os << "model not adapted to the spread payoff: exp(x_1) growth cannot be damped, "
           << "eps_1 must lie in [" << lo << ", " << -1.0 - tail << ") which is empty; "
           << "the first leg needs steepness beyond 1 (lambda_+ > 1 in the symmetric "
           << "convention, i.e. strip bound b_-(1) < " << -1.0 - tail << ")";
        throw adaptedness_error(os.str());
    }
    d.validate_for(model);
    return d;
}

Complex hurd_zhou_g(const Eigen::VectorXcd& u) {
    const int n = static_cast<int>(u.size());
    if (n < 1) throw domain_error("hurd_zhou_g: empty argument");
    const Complex i(0.0, 1.0);
    Complex head = i * u.sum() - 1.0;
    Complex denom = i * u(0) + 1.0;
    check_pole(head, "leading gamma");
    Complex lg = log_gamma(head) - log_gamma(denom);
    for (int m = 1; m < n; ++m) {
        Complex a = -i * u(m);
        check_pole(a, "product gamma");
        lg += log_gamma(a);
    }
    if (lg.real() > 709.0) {
        std::ostringstream os;
        os << "hurd_zhou_g: overflow, log magnitude " << lg.real();
        throw overflow_error(os.str());
    }
    return std::exp(lg);
}

Complex payoff_coefficient(const Eigen::VectorXi& m, const DampingVector& eps, double P) {
    eps.validate();
    if (m.size() != eps.dim()) throw domain_error("payoff_coefficient: dimension mismatch");
    if (!(P > 0.0)) throw domain_error("payoff_coefficient: P must be positive");
    Eigen::VectorXcd u(m.size());
    for (int s = 0; s < m.size(); ++s)
        u(s) = Complex(-kTwoPi * m(s) / P, eps.eps(s));
    return hurd_zhou_g(u);
}

double payoff_l1_constant(const DampingVector& eps) {
    eps.validate();
    Eigen::VectorXcd u(eps.dim());
    for (int s = 0; s < eps.dim(); ++s) u(s) = Complex(0.0, eps.eps(s));
    return hurd_zhou_g(u).real();
}

} // namespace levycross
