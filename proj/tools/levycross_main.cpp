#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "levycross/config.hpp"
#include "levycross/errors.hpp"
#include "levycross/log.hpp"

namespace lcx = levycross;

namespace {

struct CommonOpts {
    std::string config_path;
    std::optional<std::string> out;
    int threads = 0;
    std::optional<std::uint64_t> seed;
    bool serial = false;

    int resolved_threads() const { return serial ? 1 : threads; }
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "JSON run configuration")->required();
    cmd->add_option("--out", o.out, "Output path (default from config or stdout)");
    cmd->add_option("--threads", o.threads, "Worker threads (0 = auto, 1 = bit-exact serial)");
    cmd->add_option("--seed", o.seed, "Override the Monte Carlo seed");
    cmd->add_flag("--serial", o.serial, "Force serial execution (same as --threads 1)");
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class Sink {
public:
    explicit Sink(const std::optional<std::string>& path) {
        if (path) {
            file_.open(*path);
            if (!file_) throw lcx::config_error("cannot open output path: " + *path);
            to_file_ = true;
        }
    }
    std::ostream& stream() { return to_file_ ? static_cast<std::ostream&>(file_) : std::cout; }
    bool to_file() const { return to_file_; }

private:
    std::ofstream file_;
    bool to_file_ = false;
};

std::optional<std::string> pick_out(const CommonOpts& o, const lcx::RunConfig& cfg) {
    if (o.out) return o.out;
    return cfg.output.out;
}

int cmd_price(const CommonOpts& o) {
    lcx::RunConfig cfg = lcx::RunConfig::load(o.config_path);
    // Damping feasibility depends on the strips only, which drift adjustment
    // never moves; check it first so adaptedness failures surface as such.
    lcx::DampingVector eps = lcx::damping_from_config(cfg, cfg.model);
    lcx::BasketModel model = cfg.model;
    if (cfg.pricing.emm == lcx::EmmPolicy::AutoAdjust &&
        !lcx::is_emm_adjusted(model, cfg.contract.rate, cfg.contract.maturity))
        model = lcx::emm_drift_adjust(model, cfg.contract.rate);
    lcx::LatticeSpec spec = lcx::lattice_from_config(cfg, eps);
    lcx::PricingOptions opts;
    opts.emm = cfg.pricing.emm;
    opts.threads = o.resolved_threads();
    lcx::PricingResult res = lcx::price_spread(cfg.contract, model, spec, eps, opts);

    auto out_path = pick_out(o, cfg);
    Sink sink(out_path);
    sink.stream() << "value,imag_residue,lattice_size,tail_bound,trunc_bound\n"
                  << fmt(res.value) << ',' << fmt(res.imag_residue) << ',' << res.lattice_size
                  << ',' << fmt(res.bounds.tail_bound) << ',' << fmt(res.bounds.trunc_bound)
                  << '\n';
    if (sink.to_file()) {
        std::cout << "price " << fmt(res.value) << " (lattice " << res.lattice_size
                  << ", residue " << fmt(res.imag_residue) << ")\n"
                  << "diagnostic bounds: tail " << fmt(res.bounds.tail_bound) << ", exterior "
                  << fmt(res.bounds.trunc_bound) << "\n"
                  << "csv written to " << *out_path << "\n";
    }
    return 0;
}

int cmd_density(const CommonOpts& o, double gmin, double gmax, int steps,
                const std::optional<std::string>& lattice_out) {
    lcx::RunConfig cfg = lcx::RunConfig::load(o.config_path);
    const int n = cfg.model.dim();
    if (n > 2) throw lcx::unsupported_error("density: CSV output supports n <= 2");
    lcx::BasketModel model = cfg.model;
    if (cfg.pricing.emm == lcx::EmmPolicy::AutoAdjust &&
        !lcx::is_emm_adjusted(model, cfg.contract.rate, cfg.contract.maturity))
        model = lcx::emm_drift_adjust(model, cfg.contract.rate);
    lcx::LatticeSpec spec;
    if (cfg.grid.box) {
        spec = lcx::LatticeSpec::square(cfg.grid.P.value_or(6.0), *cfg.grid.box, cfg.contract.maturity);
    } else if (cfg.grid.auto_mode || !cfg.grid.P) {
        lcx::GridChoice g = lcx::auto_grid(model, cfg.contract.maturity,
                                           Eigen::VectorXd::Zero(n), std::nullopt,
                                           cfg.grid.eps_target, cfg.grid.refine);
        spec = lcx::LatticeSpec::for_model(g.P, g.R, model, cfg.contract.maturity, cfg.grid.C_override);
    } else {
        spec = lcx::LatticeSpec::for_model(*cfg.grid.P, cfg.grid.R.value_or(std::exp(2.0)), model,
                                           cfg.contract.maturity, cfg.grid.C_override);
    }
    if (cfg.grid.cap) spec.cardinality_cap = *cfg.grid.cap;

    lcx::DensityApproximant approx =
        lcx::build_density(model, spec, std::nullopt, o.resolved_threads());
    if (lattice_out) {
        std::ofstream lf(*lattice_out);
        if (!lf) throw lcx::config_error("cannot open lattice dump path: " + *lattice_out);
        for (const auto& m : lcx::cross_lattice(spec)) {
            for (int s = 0; s < n; ++s) lf << (s ? " " : "") << m(s);
            lf << '\n';
        }
    }

    // Pure Gaussian diagonal without coupling has a closed-form reference.
    bool gaussian_ref = true;
    for (const auto& c : model.diag)
        if (c.kind != lcx::ExponentKind::Gaussian) gaussian_ref = false;
    if (model.has_coupling() && model.B.cwiseAbs().sum() != 0.0) gaussian_ref = false;
    auto reference = [&](const Eigen::VectorXd& x) {
        double acc = 1.0;
        for (int s = 0; s < n; ++s) {
            double m = model.diag[s].mu * cfg.contract.maturity;
            double v = model.diag[s].sigma * model.diag[s].sigma * cfg.contract.maturity;
            acc *= std::exp(-0.5 * (x(s) - m) * (x(s) - m) / v) / std::sqrt(2.0 * M_PI * v);
        }
        return acc;
    };

    if (steps < 1) throw lcx::config_error("density: --grid-steps must be >= 1");
    if (!(gmax >= gmin)) throw lcx::config_error("density: --grid-max must be >= --grid-min");
    if (gmin == 0.0 && gmax == 0.0) {
        gmin = -0.5 * spec.P;
        gmax = 0.5 * spec.P;
    }
    Eigen::VectorXd xs(steps);
    for (int i = 0; i < steps; ++i)
        xs(i) = steps == 1 ? 0.5 * (gmin + gmax) : gmin + (gmax - gmin) * i / (steps - 1);

    auto out_path = pick_out(o, cfg);
    Sink sink(out_path);
    std::ostream& os = sink.stream();
    for (int s = 0; s < n; ++s) os << "x" << s + 1 << ',';
    os << "density,residue,outside";
    if (gaussian_ref) os << ",reference";
    os << '\n';
    Eigen::VectorXd x(n);
    std::vector<int> idx(n, 0);
    std::size_t rows = 1;
    for (int s = 0; s < n; ++s) rows *= static_cast<std::size_t>(steps);
    for (std::size_t row = 0; row < rows; ++row) {
        std::size_t rem = row;
        for (int s = n - 1; s >= 0; --s) {
            idx[s] = static_cast<int>(rem % steps);
            rem /= steps;
        }
        for (int s = 0; s < n; ++s) x(s) = xs(idx[s]);
        lcx::DensityValue v = lcx::eval_density(approx, x);
        for (int s = 0; s < n; ++s) os << fmt(x(s)) << ',';
        os << fmt(v.value) << ',' << fmt(v.imag_residue) << ',' << (v.outside_box ? 1 : 0);
        if (gaussian_ref) os << ',' << fmt(reference(x));
        os << '\n';
    }
    if (sink.to_file())
        std::cout << "density grid " << rows << " rows over [" << gmin << ", " << gmax
                  << "]^" << n << ", lattice " << approx.points.size() << "\n";
    return 0;
}

int cmd_lattice(const CommonOpts& o) {
    lcx::RunConfig cfg = lcx::RunConfig::load(o.config_path);
    lcx::DampingVector eps = lcx::damping_from_config(cfg, cfg.model);
    lcx::LatticeSpec spec = lcx::lattice_from_config(cfg, eps);
    auto pts = lcx::cross_lattice(spec);
    auto out_path = pick_out(o, cfg);
    Sink sink(out_path);
    for (const auto& m : pts) {
        for (int s = 0; s < m.size(); ++s) sink.stream() << (s ? " " : "") << m(s);
        sink.stream() << '\n';
    }
    if (sink.to_file())
        std::cout << "lattice " << pts.size() << " points (P = " << spec.P
                  << ", ln R = " << (spec.box ? 0.0 : spec.log_R()) << ")\n";
    return 0;
}

int cmd_calibrate(const CommonOpts& o) {
    lcx::RunConfig cfg = lcx::RunConfig::load(o.config_path);
    lcx::BasketModel adjusted = lcx::emm_drift_adjust(cfg.model, cfg.contract.rate);
    std::cout << "component,mu_before,mu_after,residual\n";
    for (int s = 0; s < adjusted.dim(); ++s) {
        Eigen::VectorXcd z = Eigen::VectorXcd::Zero(adjusted.dim());
        z(s) = lcx::Complex(0.0, -1.0);
        double target = std::exp(cfg.contract.rate * cfg.contract.maturity);
        double resid = std::abs(lcx::characteristic_function(z, cfg.contract.maturity, adjusted) - target) / target;
        std::cout << s << ',' << fmt(cfg.model.diag[s].mu) << ',' << fmt(adjusted.diag[s].mu)
                  << ',' << fmt(resid) << '\n';
    }
    if (adjusted.dim() == 1) {
        try {
            lcx::EsscherSolution es = lcx::esscher_theta(cfg.model.diag[0], cfg.contract.rate);
            std::cout << "esscher_theta," << fmt(es.theta) << ",residual," << fmt(es.residual) << '\n';
        } catch (const lcx::no_solution_error& e) {
            std::cout << "esscher_theta,unavailable: " << e.what() << '\n';
        }
    }
    lcx::RunConfig out_cfg = cfg;
    out_cfg.model = adjusted;
    auto out_path = pick_out(o, cfg);
    std::string path = out_path.value_or(o.config_path + ".adjusted.json");
    std::ofstream f(path);
    if (!f) throw lcx::config_error("cannot write adjusted config: " + path);
    f << out_cfg.to_json().dump(2) << '\n';
    std::cout << "adjusted config written to " << path << '\n';
    return 0;
}

int cmd_validate(const CommonOpts& o, std::int64_t paths) {
    lcx::RunConfig cfg = lcx::RunConfig::load(o.config_path);
    std::uint64_t seed = o.seed.value_or(cfg.output.seed);
    lcx::DampingVector eps = lcx::damping_from_config(cfg, cfg.model);
    lcx::BasketModel model = lcx::is_emm_adjusted(cfg.model, cfg.contract.rate, cfg.contract.maturity)
                                 ? cfg.model
                                 : lcx::emm_drift_adjust(cfg.model, cfg.contract.rate);
    lcx::LatticeSpec spec = lcx::lattice_from_config(cfg, eps);
    lcx::PricingOptions opts;
    opts.threads = o.resolved_threads();

    struct Row {
        std::string name;
        double lhs, rhs, tol;
        bool pass;
    };
    std::vector<Row> rows;
    bool gbm = true;
    try {
        lcx::gbm_from_model(model);
    } catch (const lcx::unsupported_error&) {
        gbm = false;
    }

    if (gbm) {
        lcx::GbmParams params = lcx::gbm_from_model(model);
        // Leg-1 call reduced to n = 1 against the closed form.
        {
            lcx::SpreadContract leg;
            leg.spot = cfg.contract.spot.head(1);
            leg.strike = cfg.contract.strike;
            leg.maturity = cfg.contract.maturity;
            leg.rate = cfg.contract.rate;
            lcx::BasketModel m1({model.diag[0]}, {}, {}, model.strip_margin);
            m1 = lcx::emm_drift_adjust(m1, leg.rate);
            lcx::DampingVector e1 = lcx::default_damping(m1);
            lcx::LatticeSpec s1 = lcx::auto_lattice(leg, m1, e1, 1e-6);
            double fourier = lcx::price_spread(leg, m1, s1, e1, opts).value;
            double bs = lcx::black_scholes_call(leg.spot(0), leg.strike, leg.maturity, leg.rate,
                                                model.diag[0].sigma);
            rows.push_back({"bs_parity", fourier, bs, 1e-3 * bs, std::abs(fourier - bs) <= 1e-3 * bs});
        }
        lcx::McResult mc = lcx::monte_carlo_oracle(cfg.contract, params, paths, seed);
        double fourier = lcx::price_spread(cfg.contract, model, spec, eps, opts).value;
        rows.push_back({"mc_spread", fourier, mc.mean, 3.0 * mc.std_error,
                        std::abs(fourier - mc.mean) <= 3.0 * mc.std_error});
        if (model.dim() >= 2) {
            double s1 = model.diag[0].sigma, s2 = model.diag[1].sigma;
            double rho = params.correlation(0, 1);
            double closed = lcx::margrabe_exchange(cfg.contract.spot(0), cfg.contract.spot(1),
                                                   cfg.contract.maturity, s1, s2, rho);
            lcx::SpreadContract ex = cfg.contract;
            ex.strike = 1e-10; // K = 0 exchange limit for the MC payoff
            lcx::McResult mc0 = lcx::monte_carlo_oracle(ex, params, paths, seed + 1);
            rows.push_back({"margrabe_mc", closed, mc0.mean, 3.0 * mc0.std_error,
                            std::abs(closed - mc0.mean) <= 3.0 * mc0.std_error});
        }
    }
    if (model.dim() <= 2) {
        double fourier = lcx::price_spread(cfg.contract, model, spec, eps, opts).value;
        double quad = lcx::quadrature_price_oracle(cfg.contract, model, spec);
        double tol = 1e-3 * std::max(1.0, std::abs(quad));
        rows.push_back({"quadrature", fourier, quad, tol, std::abs(fourier - quad) <= tol});
    }

    bool all = true;
    std::cout << "parity,lhs,rhs,tolerance,status\n";
    for (const auto& r : rows) {
        std::cout << r.name << ',' << fmt(r.lhs) << ',' << fmt(r.rhs) << ',' << fmt(r.tol) << ','
                  << (r.pass ? "pass" : "FAIL") << '\n';
        all = all && r.pass;
    }
    if (!all) {
        std::cout << "error_code=validation\n";
        return 3;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"levycross - spread/basket option pricing under multivariate Levy models "
                 "by Fourier series on exponential hyperbolic crosses"};
    app.require_subcommand(1);

    CommonOpts price_o, density_o, emm_o, validate_o, lattice_o;
    double gmin = 0.0, gmax = 0.0;
    int gsteps = 101;
    std::optional<std::string> lattice_dump;
    std::int64_t paths = 200000;

    CLI::App* price = app.add_subcommand("price", "Price the configured spread contract");
    add_common(price, price_o);
    CLI::App* density = app.add_subcommand("density", "Tabulate the recovered density as CSV");
    add_common(density, density_o);
    density->add_option("--grid-min", gmin, "Grid lower bound (default -P/2)");
    density->add_option("--grid-max", gmax, "Grid upper bound (default P/2)");
    density->add_option("--grid-steps", gsteps, "Points per axis");
    density->add_option("--lattice-out", lattice_dump, "Also dump the frequency lattice");
    CLI::App* emm = app.add_subcommand("calibrate-emm", "Adjust drifts to the martingale condition");
    add_common(emm, emm_o);
    CLI::App* validate = app.add_subcommand("validate", "Run the applicable closed-form/MC/quadrature parities");
    add_common(validate, validate_o);
    validate->add_option("--paths", paths, "Monte Carlo paths");
    CLI::App* lattice = app.add_subcommand("lattice", "Dump the frequency lattice");
    add_common(lattice, lattice_o);

    CLI11_PARSE(app, argc, argv);

    try {
        if (price->parsed()) return cmd_price(price_o);
        if (density->parsed()) return cmd_density(density_o, gmin, gmax, gsteps, lattice_dump);
        if (emm->parsed()) return cmd_calibrate(emm_o);
        if (validate->parsed()) return cmd_validate(validate_o, paths);
        if (lattice->parsed()) return cmd_lattice(lattice_o);
    } catch (const lcx::config_error& e) {
        std::cout << "error_code=" << e.code() << '\n';
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const lcx::budget_error& e) {
        std::cout << "error_code=" << e.code() << '\n';
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const lcx::error& e) {
        std::cout << "error_code=" << e.code() << '\n';
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cout << "error_code=internal\n";
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
