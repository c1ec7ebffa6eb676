// lgap: Liouvillian spectra, block structure and gap bounds from a JSON run
// configuration.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lgap/cli/commands.hpp"
#include "lgap/cli/json_writer.hpp"
#include "lgap/errors.hpp"

namespace {

struct Options {
    std::string config;
    std::string output;
    std::string format;
    std::string basis;
    std::string grading;
    double tol = -1.0;
    int threads = 1;
};

int run(const std::string& command, const Options& o)
{
    using namespace lgap::cli;
    RunConfig c = load_config(o.config);
    if (!o.basis.empty()) {
        try {
            lgap::basis_by_name(o.basis);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        c.basis = o.basis;
    }
    if (!o.grading.empty()) {
        if (o.grading == "none") {
            c.grading.reset();
        } else {
            try {
                c.grading = lgap::grading_by_name(o.grading);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(e.what());
            }
        }
    }
    if (o.tol >= 0.0) c.tol.zero = o.tol;
    if (!o.output.empty()) c.output_path = o.output;
    if (!o.format.empty()) c.format = o.format;

    const CommandResult r = run_command(command, c, o.threads);
    const std::string text = c.format == "csv" ? to_csv(r.table) : to_json_text(r.document);
    if (c.output_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(c.output_path, std::ios::binary);
        if (!out) throw ConfigError("cannot write output file " + c.output_path);
        out << text;
    }
    for (const auto& m : r.messages) std::cerr << m << '\n';
    return r.exit_code;
}

} // namespace

int main(int argc, char** argv)
{
    using namespace lgap::cli;
    CLI::App app{"Liouvillian spectra, block-triangular structure and gap bounds"};
    app.require_subcommand(1);
    Options o;
    std::string chosen;
    for (const auto& name : command_names()) {
        auto* sub = app.add_subcommand(name, "run the " + name + " analysis");
        sub->add_option("--config", o.config, "JSON run configuration")->required()->check(CLI::ExistingFile);
        sub->add_option("--output", o.output, "result file (default: standard output)");
        sub->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--tol", o.tol, "zero-eigenvalue tolerance")->check(CLI::NonNegativeNumber);
        sub->add_option("--threads", o.threads, "worker threads for sweeps (0: all cores)")
            ->check(CLI::NonNegativeNumber);
        sub->add_option("--basis", o.basis, "single-site basis: pauli, bx, bx_prime, bz");
        sub->add_option("--grading", o.grading, "particle_xyz, nynz, ketbra_updown or none");
        sub->callback([&chosen, name]() { chosen = name; });
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        return run(chosen, o);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const lgap::InvalidModel& e) {
        std::cerr << "invalid model: " << e.what() << '\n';
        return kExitConfig;
    } catch (const lgap::DimensionError& e) {
        std::cerr << "dimension error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const lgap::BasisDegenerate& e) {
        std::cerr << "degenerate basis: " << e.what() << '\n';
        return kExitConfig;
    } catch (const lgap::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const lgap::StructureError& e) {
        std::cerr << "structural failure: " << e.what() << '\n';
        return kExitStructure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInternal;
    }
}
