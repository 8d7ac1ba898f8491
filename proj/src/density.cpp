#include "levycross/density.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>

#include "levycross/errors.hpp"
#include "levycross/log.hpp"
#include "levycross/parallel.hpp"

namespace levycross {

namespace {

constexpr double kTwoPi = 2.0 * 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

double axis_weight(const AxisWeight& w, double T, double u) {
    return w.coef * T * std::pow(std::abs(u), w.power);
}

// Largest |m| on axis s whose weight alone fits within the remaining budget.
// Budgets within the acceptance slack of zero still admit m = 0.
long axis_bound(const LatticeSpec& spec, int s, double budget) {
    if (budget < -1e-15) return -1;
    if (budget <= 0.0) return 0;
    const AxisWeight& w = spec.weights[s];
    double u = spec.P / kTwoPi * std::pow(budget / (w.coef * spec.T), 1.0 / w.power);
    if (!std::isfinite(u)) throw budget_error("cross_lattice: unbounded axis");
    return static_cast<long>(std::floor(u + 1e-12));
}

void enumerate(const LatticeSpec& spec, int axis, double budget, Eigen::VectorXi& current,
               std::vector<Eigen::VectorXi>& out) {
    const int n = spec.dim();
    if (axis == n) {
        out.push_back(current);
        if (out.size() > spec.cardinality_cap) {
            std::ostringstream os;
            os << "cross_lattice: cardinality exceeds cap " << spec.cardinality_cap
               << " (estimate " << cross_cardinality_estimate(spec) << ")";
            throw budget_error(os.str());
        }
        return;
    }
    long M = axis_bound(spec, axis, budget);
    for (long m = -M; m <= M; ++m) {
        double w = axis_weight(spec.weights[axis], spec.T, kTwoPi * static_cast<double>(m) / spec.P);
        if (w > budget + 1e-15) continue;
        current(axis) = static_cast<int>(m);
        enumerate(spec, axis + 1, budget - w, current, out);
    }
}

} // namespace

double LatticeSpec::log_R() const { return std::log(R); }

void LatticeSpec::validate() const {
    if (!(P > 0.0)) throw config_error("lattice: P must be positive");
    if (!(T > 0.0)) throw config_error("lattice: T must be positive");
    if (dim() < 1) throw config_error("lattice: needs at least one axis");
    if (box) {
        if (box->size() != dim()) throw config_error("lattice: box bound dimension mismatch");
        if ((box->array() < 0).any()) throw config_error("lattice: box bounds must be >= 0");
        return;
    }
    if (!(R > 1.0)) throw config_error("lattice: R must be > 1");
    for (int s = 0; s < dim(); ++s) {
        const auto& w = weights[s];
        if (!(w.coef > 0.0) || !(w.power > 0.0))
            throw config_error("lattice: axis weights must be positive");
        if (w.power != 2.0 && !(nu(s) > 0.0 && nu(s) < 0.5)) {
            std::ostringstream os;
            os << "lattice: axis " << s << " order nu = " << nu(s) << " must be in (0, 1/2)";
            throw config_error(os.str());
        }
    }
}

LatticeSpec LatticeSpec::cross(double P, double R, double C, const Eigen::VectorXd& nu, double T) {
    LatticeSpec spec;
    spec.P = P;
    spec.R = R;
    spec.C = C;
    spec.T = T;
    spec.nu = nu;
    spec.weights.resize(nu.size());
    for (int s = 0; s < nu.size(); ++s) spec.weights[s] = {C, nu(s)};
    spec.validate();
    return spec;
}

LatticeSpec LatticeSpec::square(double P, const Eigen::VectorXi& box, double T) {
    LatticeSpec spec;
    spec.P = P;
    spec.R = std::exp(1.0); // unused in box mode
    spec.C = 1.0;
    spec.T = T;
    spec.nu = Eigen::VectorXd::Constant(box.size(), 2.0);
    spec.weights.assign(box.size(), AxisWeight{1.0, 2.0});
    spec.box = box;
    spec.validate();
    return spec;
}

LatticeSpec LatticeSpec::for_model(double P, double R, const BasketModel& model, double T,
                                   std::optional<double> C_override) {
    const int n = model.dim();
    LatticeSpec spec;
    spec.P = P;
    spec.R = R;
    spec.T = T;
    spec.nu.resize(n);
    spec.weights.resize(n);
    double agg = kInf;
    for (int s = 0; s < n; ++s) {
        const auto& comp = model.diag[s];
        if (comp.kind == ExponentKind::KoBoL && !C_override) agg = std::min(agg, component_decay_constant(comp));
    }
    if (C_override) agg = *C_override;
    for (int s = 0; s < n; ++s) {
        const auto& comp = model.diag[s];
        if (comp.kind == ExponentKind::Gaussian) {
            spec.nu(s) = 2.0;
            spec.weights[s] = {component_decay_constant(comp), 2.0};
        } else if (comp.kind == ExponentKind::KoBoL || C_override) {
            double nu_s = comp.kind == ExponentKind::KoBoL ? comp.nu : 0.45;
            spec.nu(s) = nu_s;
            spec.weights[s] = {agg, nu_s};
        } else {
            std::ostringstream os;
            os << "lattice: diagonal component " << s << " (" << kind_name(comp.kind)
               << ") needs a decay-constant override";
            throw config_error(os.str());
        }
    }
    spec.C = std::isfinite(agg) ? agg : 0.0;
    if (!std::isfinite(agg)) {
        // pure Gaussian basket: keep a harmless positive placeholder
        spec.C = 1.0;
    }
    spec.validate();
    return spec;
}

std::vector<Eigen::VectorXi> cross_lattice(const LatticeSpec& spec) {
    spec.validate();
    std::vector<Eigen::VectorXi> out;
    Eigen::VectorXi current(spec.dim());
    if (spec.box) {
        std::size_t total = 1;
        for (int s = 0; s < spec.dim(); ++s) total *= static_cast<std::size_t>(2 * (*spec.box)(s) + 1);
        if (total > spec.cardinality_cap) {
            std::ostringstream os;
            os << "cross_lattice: box cardinality " << total << " exceeds cap " << spec.cardinality_cap;
            throw budget_error(os.str());
        }
        out.reserve(total);
        std::function<void(int)> rec = [&](int axis) {
            if (axis == spec.dim()) {
                out.push_back(current);
                return;
            }
            for (int m = -(*spec.box)(axis); m <= (*spec.box)(axis); ++m) {
                current(axis) = m;
                rec(axis + 1);
            }
        };
        rec(0);
        return out;
    }
    double est = cross_cardinality_estimate(spec);
    if (est > 4.0 * static_cast<double>(spec.cardinality_cap)) {
        std::ostringstream os;
        os << "cross_lattice: cardinality estimate " << est << " exceeds cap " << spec.cardinality_cap;
        throw budget_error(os.str());
    }
    enumerate(spec, 0, spec.log_R(), current, out);
    return out;
}

double cross_cardinality_estimate(const LatticeSpec& spec) {
    if (spec.box) {
        double total = 1.0;
        for (int s = 0; s < spec.dim(); ++s) total *= 2.0 * (*spec.box)(s) + 1.0;
        return total;
    }
    double lnR = spec.log_R();
    if (lnR <= 0.0) return 0.0;
    double prod = 1.0;
    double inv_sum = 0.0;
    for (int s = 0; s < spec.dim(); ++s) {
        const auto& w = spec.weights[s];
        prod *= spec.P / kTwoPi * std::pow(lnR / (w.coef * spec.T), 1.0 / w.power);
        prod *= 2.0 * std::tgamma(1.0 + 1.0 / w.power);
        inv_sum += 1.0 / w.power;
    }
    return prod / std::tgamma(1.0 + inv_sum);
}

std::size_t LatticePointHash::operator()(const Eigen::VectorXi& m) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (int i = 0; i < m.size(); ++i) {
        h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(m(i)));
        h *= 1099511628211ull;
    }
    return h;
}

Complex DensityApproximant::coefficient_at(const Eigen::VectorXi& m) const {
    auto it = index.find(m);
    if (it == index.end()) return Complex(0.0, 0.0);
    return coeffs(it->second);
}

DensityApproximant build_density(const BasketModel& model, const LatticeSpec& spec,
                                 std::optional<Eigen::VectorXd> shift, int threads) {
    const int n = model.dim();
    if (spec.dim() != n) throw config_error("build_density: lattice/model dimension mismatch");
    Eigen::VectorXd eps = shift.value_or(Eigen::VectorXd::Zero(n));
    if (eps.size() != n) throw config_error("build_density: shift dimension mismatch");
    for (int s = 0; s < n; ++s) {
        if (eps(s) < model.strip_lower()(s) || eps(s) > model.strip_upper()(s)) {
            std::ostringstream os;
            os << "build_density: shift component " << s << " = " << eps(s)
               << " outside strip [" << model.strip_lower()(s) << ", " << model.strip_upper()(s) << "]";
            throw domain_error(os.str());
        }
    }
    // EMM sanity: the implied per-leg rates -psi(-i e_s) must agree.
    {
        bool feasible = true;
        double lo = kInf, hi = -kInf;
        for (int s = 0; s < n && feasible; ++s) {
            Eigen::VectorXcd z = Eigen::VectorXcd::Zero(n);
            z(s) = Complex(0.0, -1.0);
            try {
                double r_s = -multivariate_exponent(z, model).real();
                lo = std::min(lo, r_s);
                hi = std::max(hi, r_s);
            } catch (const domain_error&) {
                feasible = false;
            }
        }
        if (feasible && hi - lo > 1e-8 * (1.0 + std::abs(hi)))
            log::warn("build_density: model is not adjusted to a common martingale rate");
    }

    DensityApproximant approx;
    approx.spec = spec;
    approx.shift = eps;
    approx.points = cross_lattice(spec);
    const std::size_t count = approx.points.size();
    approx.coeffs.resize(static_cast<Eigen::Index>(count));
    const double scale = std::pow(spec.P, -n);
    std::exception_ptr failure;
    std::mutex failure_mu;
    parallel_for(count, threads, [&](std::size_t i) {
        try {
            Eigen::VectorXcd z(n);
            for (int s = 0; s < n; ++s)
                z(s) = Complex(-kTwoPi * approx.points[i](s) / spec.P, eps(s));
            approx.coeffs(static_cast<Eigen::Index>(i)) =
                scale * characteristic_function(z, spec.T, model);
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mu);
            if (!failure) failure = std::current_exception();
        }
    });
    if (failure) std::rethrow_exception(failure);

    // Summation order: decreasing coefficient magnitude, lexicographic tiebreak.
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        double ma = std::abs(approx.coeffs(static_cast<Eigen::Index>(a)));
        double mb = std::abs(approx.coeffs(static_cast<Eigen::Index>(b)));
        if (ma != mb) return ma > mb;
        return a < b;
    });
    std::vector<Eigen::VectorXi> pts(count);
    Eigen::VectorXcd cfs(static_cast<Eigen::Index>(count));
    for (std::size_t i = 0; i < count; ++i) {
        pts[i] = approx.points[order[i]];
        cfs(static_cast<Eigen::Index>(i)) = approx.coeffs(static_cast<Eigen::Index>(order[i]));
    }
    approx.points = std::move(pts);
    approx.coeffs = std::move(cfs);
    approx.index.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        approx.index.emplace(approx.points[i], static_cast<std::ptrdiff_t>(i));
    return approx;
}

DensityValue eval_density(const DensityApproximant& approx, const Eigen::VectorXd& x) {
    const int n = approx.spec.dim();
    if (x.size() != n) throw domain_error("eval_density: point dimension mismatch");
    DensityValue out;
    for (int s = 0; s < n; ++s)
        if (std::abs(x(s)) > 0.5 * approx.spec.P + 1e-12) out.outside_box = true;

    // Kahan-compensated complex accumulation in stored (magnitude) order.
    Complex sum(0.0, 0.0), comp(0.0, 0.0);
    const double w = kTwoPi / approx.spec.P;
    for (std::size_t i = 0; i < approx.points.size(); ++i) {
        double phase = 0.0;
        for (int s = 0; s < n; ++s) phase += approx.points[i](s) * x(s);
        Complex term = approx.coeffs(static_cast<Eigen::Index>(i)) *
                       std::exp(Complex(0.0, w * phase));
        Complex y = term - comp;
        Complex t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    double damp = std::exp(approx.shift.dot(x));
    Complex value = damp * sum;
    out.value = value.real();
    out.imag_residue = std::abs(value.imag());
    return out;
}

Eigen::MatrixXd eval_density_grid(const DensityApproximant& approx,
                                  const Eigen::VectorXd& xs1, const Eigen::VectorXd& xs2) {
    if (approx.spec.dim() != 2) throw unsupported_error("eval_density_grid: n = 2 only");
    const double w = kTwoPi / approx.spec.P;
    // Group lattice points by the first coordinate; precompute phase tables.
    int m1_lo = 0, m1_hi = 0, m2_lo = 0, m2_hi = 0;
    for (const auto& m : approx.points) {
        m1_lo = std::min(m1_lo, m(0));
        m1_hi = std::max(m1_hi, m(0));
        m2_lo = std::min(m2_lo, m(1));
        m2_hi = std::max(m2_hi, m(1));
    }
    const Eigen::Index n1 = xs1.size(), n2 = xs2.size();
    Eigen::MatrixXcd table2(m2_hi - m2_lo + 1, n2);
    for (int m = m2_lo; m <= m2_hi; ++m)
        for (Eigen::Index j = 0; j < n2; ++j)
            table2(m - m2_lo, j) = std::exp(Complex(0.0, w * m * xs2(j)));
    std::unordered_map<int, Eigen::VectorXcd> rows;
    for (std::size_t i = 0; i < approx.points.size(); ++i) {
        auto it = rows.try_emplace(approx.points[i](0), Eigen::VectorXcd::Zero(n2)).first;
        it->second += approx.coeffs(static_cast<Eigen::Index>(i)) *
                      table2.row(approx.points[i](1) - m2_lo).transpose();
    }
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n1, n2);
    for (const auto& [m1, row] : rows) {
        Eigen::VectorXcd col(n1);
        for (Eigen::Index i = 0; i < n1; ++i) col(i) = std::exp(Complex(0.0, w * m1 * xs1(i)));
        acc.noalias() += col * row.transpose();
    }
    Eigen::MatrixXd out(n1, n2);
    for (Eigen::Index i = 0; i < n1; ++i) {
        double d1 = approx.shift(0) * xs1(i);
        for (Eigen::Index j = 0; j < n2; ++j)
            out(i, j) = std::exp(d1 + approx.shift(1) * xs2(j)) * acc(i, j).real();
    }
    return out;
}

GridChoice auto_grid(const BasketModel& model, double T, const Eigen::VectorXd& d,
                     const std::optional<Eigen::VectorXd>& damping_eps, double eps_target,
                     int refine_level) {
    if (!(eps_target > 0.0 && eps_target < 1.0))
        throw config_error("auto_grid: eps_target must be in (0, 1)");
    double lnR = std::max(2.0, std::log(1.0 / eps_target));

    // Spatial mass box from per-axis moments.
    AxisMoments mo = axis_moments(model, T);
    double width = 4.0;
    for (int s = 0; s < model.dim(); ++s) {
        double ds = d.size() == model.dim() ? std::abs(d(s)) : 0.0;
        width = std::max(width, 2.0 * (ds + std::abs(mo.mean(s)) + 10.0 * std::sqrt(mo.variance(s))));
    }
    double P = width;

    // Strip alias term exp(-(P/2) b).
    double b = kInf;
    for (int s = 0; s < model.dim(); ++s) {
        b = std::min(b, -model.strip_lower()(s));
        b = std::min(b, model.strip_upper()(s));
    }
    if (std::isfinite(b) && b > 0.0) P = std::max(P, 2.0 * lnR / b);

    // Exterior payoff tail exp((P/2) max{-eps_j, 1 + sum eps}).
    if (damping_eps) {
        const Eigen::VectorXd& e = *damping_eps;
        double gamma = -(1.0 + e.sum());
        for (int j = 1; j < e.size(); ++j) gamma = std::min(gamma, e(j));
        if (!(gamma > 0.0)) throw domain_error("auto_grid: damping vector violates the cone constraints");
        P = std::max(P, 2.0 * lnR / gamma);
    }

    double scale = std::pow(1.2, refine_level);
    GridChoice g;
    g.P = P * scale;
    g.R = std::exp(lnR * scale);
    return g;
}

} // namespace levycross
