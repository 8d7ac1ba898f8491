#include "levycross/complexmath.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "levycross/errors.hpp"

namespace levycross {

namespace {

// Classic Lanczos set, g = 7, nine coefficients.
constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

const double kLogSqrtTwoPi = 0.5 * std::log(2.0 * 3.14159265358979323846);

bool near_nonpositive_integer(Complex z, double tol) {
    if (z.real() > 0.5) return false;
    double n = std::round(z.real());
    if (n > 0.0) return false;
    return std::abs(z.real() - n) < tol && std::abs(z.imag()) < tol;
}

// Valid for Re z >= 0.5.
Complex lanczos_log_gamma(Complex z) {
    Complex acc(kLanczos[0], 0.0);
    for (int k = 1; k < 9; ++k) acc += kLanczos[k] / (z - 1.0 + static_cast<double>(k));
    Complex t = z + (kLanczosG - 0.5);
    return kLogSqrtTwoPi + (z - 0.5) * std::log(t) - t + std::log(acc);
}

} // namespace

Complex principal_log(Complex z) {
    if (z.imag() == 0.0 && z.real() <= 0.0)
        throw domain_error("principal_log: argument on the branch cut (-inf, 0]");
    return std::log(z);
}

Complex principal_power(Complex z, double nu) {
    if (!std::isfinite(nu)) throw domain_error("principal_power: exponent must be finite");
    if (z.imag() == 0.0 && z.real() <= 0.0)
        throw domain_error("principal_power: argument on the branch cut (-inf, 0]");
    if (nu == 0.0) return Complex(1.0, 0.0);
    return std::exp(nu * std::log(z));
}

Complex log_gamma(Complex z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw domain_error("log_gamma: non-finite argument");
    if (near_nonpositive_integer(z, 1e-13)) {
        std::ostringstream os;
        os << "log_gamma: pole at nonpositive integer near (" << z.real() << ", " << z.imag() << ")";
        throw pole_error(os.str());
    }
    if (z.real() >= 0.5) return lanczos_log_gamma(z);
    // Shift right: log G(z) = log G(z + N) - sum_k Log(z + k). Each principal
    // Log is holomorphic on C \ (-inf, 0], so the sum stays branch-continuous.
    int shift = static_cast<int>(std::ceil(0.5 - z.real()));
    Complex acc(0.0, 0.0);
    for (int k = 0; k < shift; ++k) acc += std::log(z + static_cast<double>(k));
    return lanczos_log_gamma(z + static_cast<double>(shift)) - acc;
}

Complex gamma_fn(Complex z) {
    Complex lg = log_gamma(z);
    if (lg.real() > 709.0) {
        std::ostringstream os;
        os << "gamma: exp overflow, log_gamma = (" << lg.real() << ", " << lg.imag() << ")";
        throw overflow_error(os.str());
    }
    return std::exp(lg);
}

} // namespace levycross
