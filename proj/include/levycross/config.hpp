#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "levycross/density.hpp"
#include "levycross/pricer.hpp"

namespace levycross {

struct GridConfig {
    bool auto_mode = true;
    std::optional<double> P;
    std::optional<double> R;
    double eps_target = 1e-6;
    int refine = 0;
    std::optional<double> C_override;
    std::optional<Eigen::VectorXi> box;
    std::optional<std::size_t> cap;
};

struct PricingSection {
    std::optional<Eigen::VectorXd> eps;
    EmmPolicy emm = EmmPolicy::AutoAdjust;
};

struct OutputSection {
    std::optional<std::string> out;
    std::uint64_t seed = 12345;
};

// Schema-validated run configuration; every numeric constraint of the domain
// types is re-checked at load time with the JSON field path in the message.
struct RunConfig {
    BasketModel model;
    SpreadContract contract;
    GridConfig grid;
    PricingSection pricing;
    OutputSection output;

    static RunConfig load(const std::string& path);
    static RunConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

/// Resolve the grid section against the model/contract: explicit (P, R),
/// explicit square box, or the auto balance rule.
LatticeSpec lattice_from_config(const RunConfig& cfg, const DampingVector& eps,
                                int refine_level = 0);

/// Damping from the pricing section, or the model default.
DampingVector damping_from_config(const RunConfig& cfg, const BasketModel& model);

} // namespace levycross
