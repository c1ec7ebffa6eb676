// config.hpp: run configuration for the lgap command-line tool.

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "lgap/blockstruct.hpp"
#include "lgap/liouville.hpp"
#include "lgap/spectra.hpp"

namespace lgap::cli {

using json = nlohmann::ordered_json;

inline constexpr int kSpecVersion = 1;

/// Malformed or inconsistent configuration (exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Tolerances {
    double zero = kZeroTol;            // steady-state / gap threshold
    double structural = kStructuralTol;  // triangularity, Hermiticity, biorthonormality
    double imag = 1e-8;                // reality flag
    double bound = 1e-10;              // bound soundness slack
    double weyl = 1e-9;                // Weyl margin
    double balance = 1e-10;            // detailed balance residual
};

struct SweepAxis {
    std::string parameter;
    std::vector<double> values;
};

struct RunConfig {
    std::string model;
    /// model parameters as given; missing keys take the model defaults
    json parameters = json::object();
    Lattice lattice;
    std::string basis;
    std::optional<GradingRule> grading;
    bool sector_split = false;
    std::optional<Orientation> orientation;
    /// verify checks to run; empty means all that apply
    std::vector<std::string> analyses;
    bool per_block = false;
    std::size_t dense_limit = kDenseLimit;
    Tolerances tol;
    std::string output_path;
    std::string format = "json";
    /// cartesian grid, first axis varies slowest
    std::vector<SweepAxis> sweep;
};

RunConfig parse_config(const json& doc);
RunConfig load_config(const std::string& path);

/// Lattice description echoed into every result.
json lattice_to_json(const Lattice& lattice);

std::vector<std::string> verify_check_names();

} // namespace lgap::cli
