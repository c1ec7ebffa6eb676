// registry.hpp: named model families available to the command-line tool.

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lgap/cli/config.hpp"
#include "lgap/liouville.hpp"

namespace lgap::cli {

struct ModelFamily {
    std::string name;
    std::string default_basis;
    std::optional<GradingRule> default_grading;
    /// block triangular with Hermitian diagonal blocks in the default setup
    bool hermitian_blocks = false;
    /// thermal reference state for the detailed-balance check
    bool thermal = false;
    /// parameter names and defaults, in output order; arrays are allowed for
    /// the keys listed in `array_keys`
    json defaults;
    std::vector<std::string> array_keys;
    std::function<Model(const json& params, const Lattice& lattice)> build;
    /// split L = L1 + L2 for the Weyl check, when the family has one
    std::function<std::pair<Model, Model>(const json& params, const Lattice& lattice)> weyl_split;
    /// reference state for detailed balance
    std::function<Eigen::MatrixXcd(const json& params, const Lattice& lattice)> reference_state;
};

const std::vector<ModelFamily>& model_families();
const ModelFamily& find_family(const std::string& name);

/// Defaults merged with the given parameters. Throws ConfigError on unknown
/// keys or wrongly typed values.
json resolve_parameters(const ModelFamily& family, const json& given);

} // namespace lgap::cli
