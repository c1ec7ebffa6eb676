// config.cpp

#include "lgap/cli/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "lgap/cli/registry.hpp"
#include "lgap/errors.hpp"

namespace lgap::cli {

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where)
{
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) throw ConfigError(where + ": unknown key \"" + it.key() + "\"");
    }
}

const json& require_object(const json& v, const std::string& where)
{
    if (!v.is_object()) throw ConfigError(where + " must be an object");
    return v;
}

double get_number(const json& obj, const std::string& key, double fallback, const std::string& where)
{
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
    return v.get<double>();
}

int get_int(const json& obj, const std::string& key, int fallback, const std::string& where)
{
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) throw ConfigError(where + "." + key + " must be an integer");
    return v.get<int>();
}

std::string get_string(const json& obj, const std::string& key, const std::string& fallback, const std::string& where)
{
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_string()) throw ConfigError(where + "." + key + " must be a string");
    return v.get<std::string>();
}

Boundary parse_boundary(const std::string& s)
{
    if (s == "open") return Boundary::open;
    if (s == "periodic") return Boundary::periodic;
    throw ConfigError("lattice.boundary must be \"open\" or \"periodic\", got \"" + s + "\"");
}

Lattice parse_lattice(const json& obj)
{
    require_object(obj, "lattice");
    check_keys(obj, {"geometry", "sites", "extent", "dimension", "leaves", "boundary", "bonds"}, "lattice");
    const std::string geometry = get_string(obj, "geometry", "chain", "lattice");
    const Boundary boundary = parse_boundary(get_string(obj, "boundary", "open", "lattice"));
    try {
        if (geometry == "chain") {
            if (!obj.contains("sites")) throw ConfigError("lattice.sites is required for a chain");
            return Lattice::chain(get_int(obj, "sites", 0, "lattice"), boundary);
        }
        if (geometry == "cubic") {
            if (!obj.contains("extent")) throw ConfigError("lattice.extent is required for a cubic lattice");
            return Lattice::cubic(get_int(obj, "extent", 0, "lattice"), get_int(obj, "dimension", 1, "lattice"),
                                  boundary);
        }
        if (geometry == "star") {
            if (!obj.contains("leaves")) throw ConfigError("lattice.leaves is required for a star");
            return Lattice::star(get_int(obj, "leaves", 0, "lattice"));
        }
        if (geometry == "custom") {
            if (!obj.contains("sites") || !obj.contains("bonds")) {
                throw ConfigError("lattice.sites and lattice.bonds are required for a custom graph");
            }
            std::vector<std::pair<int, int>> bonds;
            const auto& list = obj.at("bonds");
            if (!list.is_array()) throw ConfigError("lattice.bonds must be an array of [i, j] pairs");
            for (const auto& b : list) {
                if (!b.is_array() || b.size() != 2 || !b[0].is_number_integer() || !b[1].is_number_integer()) {
                    throw ConfigError("lattice.bonds must be an array of [i, j] pairs");
                }
                bonds.emplace_back(b[0].get<int>(), b[1].get<int>());
            }
            return Lattice::custom(get_int(obj, "sites", 0, "lattice"), std::move(bonds));
        }
    } catch (const lgap::Error& e) {
        throw ConfigError(std::string("lattice: ") + e.what());
    }
    throw ConfigError("lattice.geometry must be chain, cubic, star or custom, got \"" + geometry + "\"");
}

std::vector<double> parse_axis_values(const json& v, const std::string& name)
{
    std::vector<double> out;
    if (v.is_array()) {
        for (const auto& x : v) {
            if (!x.is_number()) throw ConfigError("sweep." + name + " must contain numbers");
            out.push_back(x.get<double>());
        }
    } else if (v.is_object()) {
        check_keys(v, {"start", "stop", "count"}, "sweep." + name);
        if (!v.contains("start") || !v.contains("stop") || !v.contains("count")) {
            throw ConfigError("sweep." + name + " range needs start, stop and count");
        }
        const double a = get_number(v, "start", 0.0, "sweep." + name);
        const double b = get_number(v, "stop", 0.0, "sweep." + name);
        const int n = get_int(v, "count", 0, "sweep." + name);
        if (n < 1) throw ConfigError("sweep." + name + ".count must be positive");
        for (int k = 0; k < n; ++k) out.push_back(n == 1 ? a : a + (b - a) * k / (n - 1));
    } else {
        throw ConfigError("sweep." + name + " must be an array or a {start, stop, count} range");
    }
    if (out.empty()) throw ConfigError("sweep." + name + " has no values");
    return out;
}

} // namespace

std::vector<std::string> verify_check_names()
{
    return {"biorthonormality", "trace_preservation", "triangularity", "hermiticity",
            "weyl",             "bound_soundness",    "detailed_balance"};
}

RunConfig parse_config(const json& doc)
{
    require_object(doc, "config");
    check_keys(doc,
               {"spec_version", "model", "lattice", "basis", "grading", "sector_split", "orientation", "analyses",
                "per_block", "dense_limit", "tolerances", "output", "sweep"},
               "config");
    if (!doc.contains("spec_version")) throw ConfigError("config: missing \"spec_version\"");
    if (!doc.at("spec_version").is_number_integer() || doc.at("spec_version").get<int>() != kSpecVersion) {
        throw ConfigError("config: unsupported spec_version (expected " + std::to_string(kSpecVersion) + ")");
    }

    RunConfig c;
    if (!doc.contains("model")) throw ConfigError("config: missing \"model\"");
    const auto& model = require_object(doc.at("model"), "model");
    check_keys(model, {"name", "parameters"}, "model");
    c.model = get_string(model, "name", "", "model");
    const ModelFamily* family = nullptr;
    try {
        family = &find_family(c.model);
    } catch (const std::out_of_range& e) {
        throw ConfigError(e.what());
    }
    if (model.contains("parameters")) c.parameters = require_object(model.at("parameters"), "model.parameters");
    resolve_parameters(*family, c.parameters);

    if (!doc.contains("lattice")) throw ConfigError("config: missing \"lattice\"");
    c.lattice = parse_lattice(doc.at("lattice"));

    c.basis = get_string(doc, "basis", family->default_basis, "config");
    try {
        basis_by_name(c.basis);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    c.grading = family->default_grading;
    if (doc.contains("grading")) {
        const auto& g = doc.at("grading");
        if (g.is_null() || (g.is_string() && g.get<std::string>() == "none")) {
            c.grading.reset();
        } else if (g.is_string()) {
            try {
                c.grading = grading_by_name(g.get<std::string>());
            } catch (const std::invalid_argument& e) {
                throw ConfigError(e.what());
            }
        } else {
            throw ConfigError("config.grading must be a string or null");
        }
    }
    if (doc.contains("sector_split")) {
        if (!doc.at("sector_split").is_boolean()) throw ConfigError("config.sector_split must be a boolean");
        c.sector_split = doc.at("sector_split").get<bool>();
    }
    if (doc.contains("orientation")) {
        const std::string o = get_string(doc, "orientation", "", "config");
        if (o == "lower") {
            c.orientation = Orientation::lower;
        } else if (o == "upper") {
            c.orientation = Orientation::upper;
        } else {
            throw ConfigError("config.orientation must be \"lower\" or \"upper\"");
        }
    }
    if (doc.contains("analyses")) {
        const auto& a = doc.at("analyses");
        if (!a.is_array()) throw ConfigError("config.analyses must be an array of check names");
        const auto known = verify_check_names();
        for (const auto& x : a) {
            if (!x.is_string() || std::find(known.begin(), known.end(), x.get<std::string>()) == known.end()) {
                throw ConfigError("config.analyses: unknown check " + x.dump());
            }
            c.analyses.push_back(x.get<std::string>());
        }
    }
    if (doc.contains("per_block")) {
        if (!doc.at("per_block").is_boolean()) throw ConfigError("config.per_block must be a boolean");
        c.per_block = doc.at("per_block").get<bool>();
    }
    if (doc.contains("dense_limit")) {
        const int limit = get_int(doc, "dense_limit", 0, "config");
        if (limit < 1) throw ConfigError("config.dense_limit must be positive");
        c.dense_limit = static_cast<std::size_t>(limit);
    }
    if (doc.contains("tolerances")) {
        const auto& t = require_object(doc.at("tolerances"), "tolerances");
        check_keys(t, {"zero", "structural", "imag", "bound", "weyl", "balance"}, "tolerances");
        c.tol.zero = get_number(t, "zero", c.tol.zero, "tolerances");
        c.tol.structural = get_number(t, "structural", c.tol.structural, "tolerances");
        c.tol.imag = get_number(t, "imag", c.tol.imag, "tolerances");
        c.tol.bound = get_number(t, "bound", c.tol.bound, "tolerances");
        c.tol.weyl = get_number(t, "weyl", c.tol.weyl, "tolerances");
        c.tol.balance = get_number(t, "balance", c.tol.balance, "tolerances");
        for (double v : {c.tol.zero, c.tol.structural, c.tol.imag, c.tol.bound, c.tol.weyl, c.tol.balance}) {
            if (!(v >= 0.0)) throw ConfigError("tolerances must be non-negative");
        }
    }
    if (doc.contains("output")) {
        const auto& o = require_object(doc.at("output"), "output");
        check_keys(o, {"path", "format"}, "output");
        c.output_path = get_string(o, "path", "", "output");
        c.format = get_string(o, "format", "json", "output");
        if (c.format != "json" && c.format != "csv") throw ConfigError("output.format must be json or csv");
    }
    if (doc.contains("sweep")) {
        const auto& s = require_object(doc.at("sweep"), "sweep");
        const json resolved = resolve_parameters(*family, c.parameters);
        for (auto it = s.begin(); it != s.end(); ++it) {
            if (!resolved.contains(it.key()) || !resolved.at(it.key()).is_number()) {
                throw ConfigError("sweep: \"" + it.key() + "\" is not a scalar parameter of model " + c.model);
            }
            c.sweep.push_back({it.key(), parse_axis_values(it.value(), it.key())});
        }
    }
    return c;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return parse_config(doc);
}

json lattice_to_json(const Lattice& lattice)
{
    json j;
    j["geometry"] = std::string(to_string(lattice.geometry));
    j["sites"] = lattice.sites;
    j["dimension"] = lattice.dimension;
    j["boundary"] = std::string(to_string(lattice.boundary));
    json bonds = json::array();
    for (const auto& [a, b] : lattice.bonds) bonds.push_back(json::array({a, b}));
    j["bonds"] = bonds;
    return j;
}

} // namespace lgap::cli
