// registry.cpp

#include "lgap/cli/registry.hpp"

#include <algorithm>
#include <stdexcept>

#include "lgap/models.hpp"

namespace lgap::cli {

namespace {

double num(const json& p, const char* key) { return p.at(key).get<double>(); }

std::vector<std::array<double, 3>> site_fields(const json& p, const Lattice& lat)
{
    const auto& uniform = p.at("field");
    const auto& per_site = p.at("fields");
    if (!uniform.is_null() && !per_site.is_null()) throw ConfigError("give either field or fields, not both");
    auto triple = [](const json& v, const std::string& where) {
        if (!v.is_array() || v.size() != 3) throw ConfigError(where + " must be [h_x, h_y, h_z]");
        std::array<double, 3> h{};
        for (std::size_t a = 0; a < 3; ++a) {
            if (!v[a].is_number()) throw ConfigError(where + " must contain numbers");
            h[a] = v[a].get<double>();
        }
        return h;
    };
    std::vector<std::array<double, 3>> out;
    if (!uniform.is_null()) {
        out.assign(static_cast<std::size_t>(lat.sites), triple(uniform, "field"));
    } else if (!per_site.is_null()) {
        if (!per_site.is_array() || static_cast<int>(per_site.size()) != lat.sites) {
            throw ConfigError("fields needs one [h_x, h_y, h_z] per site");
        }
        for (const auto& v : per_site) out.push_back(triple(v, "fields[i]"));
    }
    return out;
}

Eigen::MatrixXd coupling_matrix(const json& p, const Lattice& lat)
{
    const auto& given = p.at("couplings");
    if (given.is_null()) return bond_couplings(lat, num(p, "J"));
    if (!given.is_array() || static_cast<int>(given.size()) != lat.sites) {
        throw ConfigError("couplings must be an N x N array");
    }
    Eigen::MatrixXd j(lat.sites, lat.sites);
    for (int r = 0; r < lat.sites; ++r) {
        const auto& row = given[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<int>(row.size()) != lat.sites) {
            throw ConfigError("couplings must be an N x N array");
        }
        for (int c = 0; c < lat.sites; ++c) {
            if (!row[static_cast<std::size_t>(c)].is_number()) throw ConfigError("couplings must contain numbers");
            j(r, c) = row[static_cast<std::size_t>(c)].get<double>();
        }
    }
    return j;
}

std::vector<double> xx_fields(const json& p, const Lattice& lat)
{
    const auto& per_site = p.at("fields");
    if (per_site.is_null()) return std::vector<double>(static_cast<std::size_t>(lat.sites), num(p, "h"));
    if (!per_site.is_array() || static_cast<int>(per_site.size()) != lat.sites) {
        throw ConfigError("fields needs one number per site");
    }
    std::vector<double> out;
    for (const auto& v : per_site) {
        if (!v.is_number()) throw ConfigError("fields must contain numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

Axis parse_axis(const json& p)
{
    const auto a = p.at("axis").get<std::string>();
    if (a == "x") return Axis::x;
    if (a == "y") return Axis::y;
    throw ConfigError("axis must be \"x\" or \"y\"");
}

DaviesSpec davies_spec(const json& p, const Lattice& lat)
{
    if (lat.sites > 6) throw ConfigError("davies: at most 6 sites (Hilbert dimension 64)");
    DaviesSpec spec;
    spec.hamiltonian = hamiltonian_matrix(xxz_hamiltonian(lat, num(p, "jxy"), num(p, "jz"), num(p, "h")), lat.sites);
    spec.beta = num(p, "beta");
    const auto& letters = p.at("couplings");
    if (!letters.is_array() || letters.empty()) throw ConfigError("davies couplings must be a list of \"x\", \"y\", \"z\"");
    for (const auto& l : letters) {
        const std::string s = l.is_string() ? l.get<std::string>() : "";
        LocalOperator op;
        if (s == "x") {
            op = ops::sigma_x();
        } else if (s == "y") {
            op = ops::sigma_y();
        } else if (s == "z") {
            op = ops::sigma_z();
        } else {
            throw ConfigError("davies couplings must be a list of \"x\", \"y\", \"z\"");
        }
        for (int i = 0; i < lat.sites; ++i) spec.couplings.push_back(embed(SiteOperator::on_site(i, op), lat.sites));
    }
    return spec;
}

std::vector<ModelFamily> make_families()
{
    std::vector<ModelFamily> f;

    ModelFamily z2;
    z2.name = "z2";
    z2.default_basis = "bx_prime";
    z2.default_grading = GradingRule::particle_xyz;
    z2.hermitian_blocks = true;
    z2.defaults = {{"gamma_x", 1.0}, {"gamma_f", 1.0}, {"gamma_z", 1.0}};
    z2.build = [](const json& p, const Lattice& lat) {
        return z2_model({num(p, "gamma_x"), num(p, "gamma_f"), num(p, "gamma_z")}, lat);
    };
    z2.weyl_split = [](const json& p, const Lattice& lat) {
        return std::make_pair(z2_model({num(p, "gamma_x"), 0.0, 0.0}, lat),
                              z2_model({0.0, num(p, "gamma_f"), num(p, "gamma_z")}, lat));
    };
    f.push_back(z2);

    ModelFamily emission;
    emission.name = "emission";
    emission.default_basis = "pauli";
    emission.default_grading = GradingRule::particle_xyz;
    emission.defaults = {{"gamma", 1.0}, {"field", nullptr}, {"fields", nullptr}};
    emission.array_keys = {"field", "fields"};
    emission.build = [](const json& p, const Lattice& lat) {
        return emission_model(num(p, "gamma"), lat) + field_hamiltonian(site_fields(p, lat));
    };
    f.push_back(emission);

    ModelFamily xx;
    xx.name = "xx";
    xx.default_basis = "pauli";
    xx.default_grading = GradingRule::nynz;
    xx.defaults = {{"gamma", 1.0}, {"J", 1.0}, {"couplings", nullptr}, {"h", 0.0}, {"fields", nullptr}, {"axis", "x"}};
    xx.array_keys = {"couplings", "fields"};
    xx.build = [](const json& p, const Lattice& lat) {
        return emission_model(num(p, "gamma"), lat) + xx_model(coupling_matrix(p, lat), xx_fields(p, lat), parse_axis(p));
    };
    f.push_back(xx);

    ModelFamily xxz;
    xxz.name = "xxz";
    xxz.default_basis = "bz";
    xxz.default_grading = GradingRule::ketbra_updown;
    xxz.defaults = {{"gamma", 1.0}, {"jxy", 1.0}, {"jz", 0.0}, {"hz", 0.0}};
    xxz.build = [](const json& p, const Lattice& lat) {
        return emission_model(num(p, "gamma"), lat) +
               magcons_model(xxz_hamiltonian(lat, num(p, "jxy"), num(p, "jz"), num(p, "hz")), lat);
    };
    f.push_back(xxz);

    ModelFamily davies;
    davies.name = "davies";
    davies.default_basis = "pauli";
    davies.thermal = true;
    davies.defaults = {{"beta", 1.0}, {"h", 1.0}, {"jxy", 0.0}, {"jz", 0.0}, {"couplings", json::array({"x"})}};
    davies.array_keys = {"couplings"};
    davies.build = [](const json& p, const Lattice& lat) { return davies_generator(davies_spec(p, lat)); };
    davies.reference_state = [](const json& p, const Lattice& lat) {
        const auto spec = davies_spec(p, lat);
        return thermal_state(spec.hamiltonian, spec.beta);
    };
    f.push_back(davies);

    return f;
}

} // namespace

const std::vector<ModelFamily>& model_families()
{
    static const std::vector<ModelFamily> families = make_families();
    return families;
}

const ModelFamily& find_family(const std::string& name)
{
    for (const auto& f : model_families()) {
        if (f.name == name) return f;
    }
    std::string known;
    for (const auto& f : model_families()) known += (known.empty() ? "" : ", ") + f.name;
    throw std::out_of_range("unknown model \"" + name + "\" (known: " + known + ")");
}

json resolve_parameters(const ModelFamily& family, const json& given)
{
    json out = family.defaults;
    for (auto it = given.begin(); it != given.end(); ++it) {
        if (!out.contains(it.key())) {
            throw ConfigError("model " + family.name + ": unknown parameter \"" + it.key() + "\"");
        }
        const json& def = family.defaults.at(it.key());
        const bool array_key =
            std::find(family.array_keys.begin(), family.array_keys.end(), it.key()) != family.array_keys.end();
        const json& v = it.value();
        const bool ok = def.is_string() ? v.is_string()
                        : array_key     ? (v.is_array() || v.is_null())
                                        : v.is_number();
        if (!ok) throw ConfigError("model " + family.name + ": parameter \"" + it.key() + "\" has the wrong type");
        if (v.is_number()) {
            out[it.key()] = v.get<double>();
        } else {
            out[it.key()] = v;
        }
    }
    return out;
}

} // namespace lgap::cli
