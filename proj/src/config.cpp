#include "levycross/config.hpp"

#include <fstream>
#include <sstream>

#include "levycross/errors.hpp"

namespace levycross {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& why) {
    throw config_error(path + ": " + why);
}

const json& require(const json& j, const std::string& parent, const std::string& key) {
    if (!j.is_object()) fail(parent, "must be an object");
    auto it = j.find(key);
    if (it == j.end()) fail(parent + "." + key, "missing required field");
    return *it;
}

double number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "must be a number");
    return j.get<double>();
}

double number_at(const json& j, const std::string& parent, const std::string& key) {
    return number(require(j, parent, key), parent + "." + key);
}

Eigen::VectorXd vector_at(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) fail(path, "must be a non-empty array of numbers");
    Eigen::VectorXd v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], path);
    return v;
}

LevyExponentSpec component_from_json(const json& j, const std::string& path) {
    std::string kind = require(j, path, "kind").get<std::string>();
    try {
        if (kind == "kobol") {
            return LevyExponentSpec::kobol(number_at(j, path, "nu"), number_at(j, path, "c_plus"),
                                           number_at(j, path, "c_minus"),
                                           number_at(j, path, "lambda_minus"),
                                           number_at(j, path, "lambda_plus"),
                                           j.value("mu", 0.0));
        }
        if (kind == "vg" || kind == "variance_gamma") {
            return LevyExponentSpec::variance_gamma(
                number_at(j, path, "c_plus"), number_at(j, path, "c_minus"),
                number_at(j, path, "lambda_minus"), number_at(j, path, "lambda_plus"),
                j.value("mu", 0.0));
        }
        if (kind == "nig") {
            return LevyExponentSpec::nig(number_at(j, path, "alpha"), number_at(j, path, "beta"),
                                         number_at(j, path, "delta"), j.value("nu", 1.0),
                                         j.value("mu", 0.0));
        }
        if (kind == "gaussian") {
            return LevyExponentSpec::gaussian(number_at(j, path, "sigma"), j.value("mu", 0.0));
        }
    } catch (const config_error& e) {
        fail(path, e.what());
    } catch (const unsupported_error& e) {
        fail(path, e.what());
    }
    fail(path + ".kind", "unknown kind '" + kind + "' (kobol | vg | nig | gaussian)");
}

json component_to_json(const LevyExponentSpec& s) {
    json j;
    j["kind"] = kind_name(s.kind);
    j["mu"] = s.mu;
    switch (s.kind) {
        case ExponentKind::KoBoL:
            j["nu"] = s.nu;
            [[fallthrough]];
        case ExponentKind::VarianceGamma:
            j["c_plus"] = s.c_plus;
            j["c_minus"] = s.c_minus;
            j["lambda_minus"] = s.lambda_minus;
            j["lambda_plus"] = s.lambda_plus;
            break;
        case ExponentKind::NormalInverseGaussian:
            j["alpha"] = s.alpha;
            j["beta"] = s.beta;
            j["delta"] = s.delta;
            j["nu"] = s.nu;
            break;
        case ExponentKind::Gaussian:
            j["sigma"] = s.sigma;
            break;
    }
    return j;
}

} // namespace

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw config_error(std::string("config parse error: ") + e.what());
    }
    return from_json(j);
}

RunConfig RunConfig::from_json(const json& j) {
    RunConfig cfg;

    const json& jm = require(j, "config", "model");
    const json& jcomps = require(jm, "model", "components");
    if (!jcomps.is_array() || jcomps.empty()) fail("model.components", "must be a non-empty array");
    std::vector<LevyExponentSpec> diag;
    for (std::size_t i = 0; i < jcomps.size(); ++i) {
        std::ostringstream p;
        p << "model.components[" << i << "]";
        diag.push_back(component_from_json(jcomps[i], p.str()));
    }
    std::vector<LevyExponentSpec> coupling;
    Eigen::MatrixXd B;
    if (jm.contains("coupling")) {
        const json& jc = jm["coupling"];
        if (!jc.is_array()) fail("model.coupling", "must be an array");
        for (std::size_t i = 0; i < jc.size(); ++i) {
            std::ostringstream p;
            p << "model.coupling[" << i << "]";
            coupling.push_back(component_from_json(jc[i], p.str()));
        }
        const json& jb = require(jm, "model", "B");
        if (!jb.is_array() || jb.size() != diag.size()) fail("model.B", "must be an n x n array");
        B.resize(diag.size(), diag.size());
        for (std::size_t r = 0; r < jb.size(); ++r) {
            if (!jb[r].is_array() || jb[r].size() != diag.size()) fail("model.B", "must be an n x n array");
            for (std::size_t c = 0; c < jb[r].size(); ++c) {
                std::ostringstream p;
                p << "model.B[" << r << "][" << c << "]";
                B(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = number(jb[r][c], p.str());
            }
        }
    }
    double margin = jm.value("strip_margin", 0.95);
    try {
        cfg.model = BasketModel(std::move(diag), std::move(coupling), std::move(B), margin);
    } catch (const config_error& e) {
        fail("model", e.what());
    }

    const json& jc = require(j, "config", "contract");
    cfg.contract.spot = vector_at(require(jc, "contract", "spot"), "contract.spot");
    cfg.contract.strike = number_at(jc, "contract", "strike");
    cfg.contract.maturity = number_at(jc, "contract", "maturity");
    cfg.contract.rate = number_at(jc, "contract", "rate");
    try {
        cfg.contract.validate();
    } catch (const config_error& e) {
        fail("contract", e.what());
    }
    if (cfg.contract.dim() != cfg.model.dim())
        fail("contract.spot", "dimension does not match model.components");

    if (j.contains("grid")) {
        const json& jg = j["grid"];
        if (!jg.is_object()) fail("grid", "must be an object");
        cfg.grid.auto_mode = jg.value("auto", !jg.contains("P"));
        if (jg.contains("P")) cfg.grid.P = number(jg["P"], "grid.P");
        if (jg.contains("R")) cfg.grid.R = number(jg["R"], "grid.R");
        if (jg.contains("eps_target")) cfg.grid.eps_target = number(jg["eps_target"], "grid.eps_target");
        if (jg.contains("refine")) cfg.grid.refine = jg["refine"].get<int>();
        if (jg.contains("C_override")) cfg.grid.C_override = number(jg["C_override"], "grid.C_override");
        if (jg.contains("cap")) {
            if (!jg["cap"].is_number_unsigned()) fail("grid.cap", "must be a nonnegative integer");
            cfg.grid.cap = jg["cap"].get<std::size_t>();
        }
        if (jg.contains("box")) {
            const json& jb = jg["box"];
            if (!jb.is_array() || jb.size() != static_cast<std::size_t>(cfg.model.dim()))
                fail("grid.box", "must be an array of per-axis bounds matching the dimension");
            Eigen::VectorXi box(jb.size());
            for (std::size_t i = 0; i < jb.size(); ++i) {
                if (!jb[i].is_number_integer()) fail("grid.box", "entries must be integers");
                box(static_cast<Eigen::Index>(i)) = jb[i].get<int>();
            }
            cfg.grid.box = box;
        }
        if (!cfg.grid.auto_mode && !cfg.grid.P)
            fail("grid", "explicit grids need P (with R or box); otherwise set auto = true");
        if (cfg.grid.P && !cfg.grid.R && !cfg.grid.box)
            fail("grid", "explicit P needs R (cross mode) or box (square mode)");
    }

    if (j.contains("pricing")) {
        const json& jp = j["pricing"];
        if (!jp.is_object()) fail("pricing", "must be an object");
        if (jp.contains("eps")) cfg.pricing.eps = vector_at(jp["eps"], "pricing.eps");
        std::string policy = jp.value("emm_policy", "auto-adjust");
        if (policy == "auto-adjust") {
            cfg.pricing.emm = EmmPolicy::AutoAdjust;
        } else if (policy == "strict") {
            cfg.pricing.emm = EmmPolicy::Strict;
        } else {
            fail("pricing.emm_policy", "must be 'auto-adjust' or 'strict'");
        }
        if (cfg.pricing.eps && cfg.pricing.eps->size() != cfg.model.dim())
            fail("pricing.eps", "dimension does not match the model");
    }

    if (j.contains("output")) {
        const json& jo = j["output"];
        if (!jo.is_object()) fail("output", "must be an object");
        if (jo.contains("out")) cfg.output.out = jo["out"].get<std::string>();
        if (jo.contains("seed")) cfg.output.seed = jo["seed"].get<std::uint64_t>();
    }
    return cfg;
}

json RunConfig::to_json() const {
    json j;
    json jm;
    jm["strip_margin"] = model.strip_margin;
    for (const auto& c : model.diag) jm["components"].push_back(component_to_json(c));
    if (model.has_coupling()) {
        for (const auto& c : model.coupling) jm["coupling"].push_back(component_to_json(c));
        json rows = json::array();
        for (Eigen::Index r = 0; r < model.B.rows(); ++r) {
            json row = json::array();
            for (Eigen::Index c = 0; c < model.B.cols(); ++c) row.push_back(model.B(r, c));
            rows.push_back(row);
        }
        jm["B"] = rows;
    }
    j["model"] = jm;

    json jc;
    jc["spot"] = std::vector<double>(contract.spot.data(), contract.spot.data() + contract.spot.size());
    jc["strike"] = contract.strike;
    jc["maturity"] = contract.maturity;
    jc["rate"] = contract.rate;
    j["contract"] = jc;

    json jg;
    jg["auto"] = grid.auto_mode;
    if (grid.P) jg["P"] = *grid.P;
    if (grid.R) jg["R"] = *grid.R;
    jg["eps_target"] = grid.eps_target;
    if (grid.refine != 0) jg["refine"] = grid.refine;
    if (grid.C_override) jg["C_override"] = *grid.C_override;
    if (grid.cap) jg["cap"] = *grid.cap;
    if (grid.box) {
        json b = json::array();
        for (Eigen::Index i = 0; i < grid.box->size(); ++i) b.push_back((*grid.box)(i));
        jg["box"] = b;
    }
    j["grid"] = jg;

    json jp;
    if (pricing.eps)
        jp["eps"] = std::vector<double>(pricing.eps->data(), pricing.eps->data() + pricing.eps->size());
    jp["emm_policy"] = pricing.emm == EmmPolicy::Strict ? "strict" : "auto-adjust";
    j["pricing"] = jp;

    json jo;
    if (output.out) jo["out"] = *output.out;
    jo["seed"] = output.seed;
    j["output"] = jo;
    return j;
}

LatticeSpec lattice_from_config(const RunConfig& cfg, const DampingVector& eps, int refine_level) {
    LatticeSpec spec;
    int level = cfg.grid.refine + refine_level;
    if (cfg.grid.box) {
        if (!cfg.grid.P) throw config_error("grid: square mode needs P");
        spec = LatticeSpec::square(*cfg.grid.P, *cfg.grid.box, cfg.contract.maturity);
    } else if (cfg.grid.auto_mode || !cfg.grid.P) {
        spec = auto_lattice(cfg.contract, cfg.model, eps, cfg.grid.eps_target,
                            cfg.grid.C_override, level);
    } else {
        spec = LatticeSpec::for_model(*cfg.grid.P, cfg.grid.R.value_or(std::exp(2.0)), cfg.model,
                                      cfg.contract.maturity, cfg.grid.C_override);
    }
    if (cfg.grid.cap) spec.cardinality_cap = *cfg.grid.cap;
    return spec;
}

DampingVector damping_from_config(const RunConfig& cfg, const BasketModel& model) {
    if (cfg.pricing.eps) {
        DampingVector d;
        d.eps = *cfg.pricing.eps;
        d.validate_for(model);
        return d;
    }
    return default_damping(model);
}

} // namespace levycross
