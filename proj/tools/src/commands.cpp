// commands.cpp

#include "lgap/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <optional>
#include <sstream>
#include <thread>

#include "lgap/cli/json_writer.hpp"
#include "lgap/cli/registry.hpp"
#include "lgap/errors.hpp"
#include "lgap/models.hpp"

namespace lgap::cli {

namespace {

struct Context {
    const ModelFamily* family = nullptr;
    json parameters;
    Model model;
    SuperMatrix matrix;
    std::optional<BlockPartition> partition;
};

Context prepare(const RunConfig& c, const json& overrides = json::object())
{
    Context ctx;
    ctx.family = &find_family(c.model);
    json given = c.parameters;
    for (auto it = overrides.begin(); it != overrides.end(); ++it) given[it.key()] = it.value();
    ctx.parameters = resolve_parameters(*ctx.family, given);
    ctx.model = ctx.family->build(ctx.parameters, c.lattice);
    const LocalBasis basis = basis_by_name(c.basis);
    ctx.matrix = assemble(ctx.model, c.lattice, basis);
    if (c.grading) {
        ctx.partition = grade_ordering(basis, c.lattice, *c.grading, c.sector_split);
        if (c.orientation) ctx.partition->orientation = *c.orientation;
    }
    return ctx;
}

json header(const std::string& command, const RunConfig& c, const Context& ctx)
{
    json h;
    h["spec_version"] = kSpecVersion;
    h["command"] = command;
    h["model"] = {{"name", c.model}, {"parameters", ctx.parameters}};
    h["lattice"] = lattice_to_json(c.lattice);
    h["basis"] = c.basis;
    h["grading"] = c.grading ? json(std::string(to_string(*c.grading))) : json(nullptr);
    h["sector_split"] = c.sector_split;
    h["dim"] = ctx.matrix.dim();
    if (!ctx.model.warnings.empty()) h["warnings"] = ctx.model.warnings;
    return h;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string cell(double v) { return format_double(v); }
std::string cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

json eigenvalue_list(const std::vector<cplx>& values)
{
    json out = json::array();
    for (const auto& l : values) out.push_back(json::array({l.real(), l.imag()}));
    return out;
}

json key_to_json(const GradeKey& k)
{
    return {{"total", k.total}, {"parities", k.parities}, {"aux", k.aux}, {"rank", k.rank}};
}

TriangularityReport triangularity(const RunConfig& c, Context& ctx)
{
    auto& p = *ctx.partition;
    const auto r = c.orientation ? verify_block_triangular(ctx.matrix, p, c.tol.structural, *c.orientation)
                                 : detect_block_triangular(ctx.matrix, p, c.tol.structural);
    p.orientation = r.orientation;
    return r;
}

json triangularity_json(const TriangularityReport& r)
{
    json j;
    j["orientation"] = std::string(to_string(r.orientation));
    j["triangular"] = r.is_triangular;
    j["max_violation"] = r.max_violation;
    j["worst_entry"] = r.worst_entry ? json::array({r.worst_entry->first, r.worst_entry->second}) : json(nullptr);
    return j;
}

void require_grading(const RunConfig& c, const std::string& command)
{
    if (!c.grading) throw ConfigError(command + " needs a grading rule (config \"grading\" or --grading)");
}

std::vector<DiagonalBlock> triangular_blocks(const RunConfig& c, Context& ctx)
{
    if (!ctx.partition) throw ConfigError("block decomposition needs a grading rule (config \"grading\" or --grading)");
    const auto r = triangularity(c, ctx);
    if (!r.is_triangular) {
        throw StructureError("superoperator is not block triangular in the " +
                             std::string(to_string(*c.grading)) + " ordering (max violation " +
                             format_double(r.max_violation) + ")");
    }
    return extract_diagonal_blocks(ctx.matrix, *ctx.partition, c.tol.structural, true);
}

struct SpectrumData {
    SpectrumResult result;
    std::string method;
    std::vector<DiagonalBlock> blocks;
    std::vector<std::vector<cplx>> block_values;
};

SpectrumData compute_spectrum(const RunConfig& c, Context& ctx)
{
    SpectrumData d;
    if (!c.per_block && ctx.matrix.dim() <= c.dense_limit) {
        d.method = "dense";
        d.result = summarize_spectrum(eigenvalues(ctx.matrix.dense(c.dense_limit), c.dense_limit), c.tol.zero);
        return d;
    }
    d.method = "blocks";
    d.blocks = triangular_blocks(c, ctx);
    std::vector<cplx> all;
    for (const auto& b : d.blocks) {
        if (static_cast<std::size_t>(b.matrix.rows()) > c.dense_limit) {
            throw NumericalError("diagonal block of size " + std::to_string(b.matrix.rows()) +
                                 " exceeds the dense limit");
        }
        d.block_values.push_back(block_eigenvalues(b.matrix, c.tol.structural));
        all.insert(all.end(), d.block_values.back().begin(), d.block_values.back().end());
    }
    d.result = summarize_spectrum(std::move(all), c.tol.zero);
    return d;
}

struct BlockBounds {
    std::size_t size = 0;
    std::optional<double> exact_max_re;
    std::optional<BoundReport> hermitian, singular;
    BoundReport rows, cols;
    double best_upper = 0.0;
    bool steady = false;
    /// largest decaying real part (exact) or best upper bound
    std::optional<double> gap_contribution;
};

BlockBounds bound_block(const Eigen::MatrixXcd& block, const RunConfig& c)
{
    BlockBounds b;
    b.size = static_cast<std::size_t>(block.rows());
    b.rows = gershgorin_bound(block, GershgorinMode::rows);
    b.cols = gershgorin_bound(block, GershgorinMode::cols);
    b.best_upper = std::min(b.rows.upper, b.cols.upper);
    if (b.size <= c.dense_limit) {
        b.hermitian = hermitian_component_bounds(block);
        b.singular = smallest_singular_value(block);
        b.best_upper = std::min(b.best_upper, b.hermitian->upper);
        const auto ev = block_eigenvalues(block, c.tol.structural);
        b.exact_max_re = ev.front().real();
        const auto g = spectral_gap(ev, c.tol.zero);
        b.steady = g.steady_dim > 0;
        if (b.steady) {
            if (g.gap) b.gap_contribution = -*g.gap;
        } else {
            b.gap_contribution = b.best_upper;
        }
    } else {
        b.gap_contribution = b.best_upper;
    }
    return b;
}

std::optional<double> gap_lower_bound(const std::vector<BlockBounds>& blocks)
{
    std::optional<double> top;
    for (const auto& b : blocks) {
        if (b.gap_contribution) top = std::max(top.value_or(-std::numeric_limits<double>::infinity()), *b.gap_contribution);
    }
    if (!top) return std::nullopt;
    return -*top;
}

json bound_json(const BoundReport& r)
{
    json j{{"upper", r.upper}, {"lower", optional_number(r.lower)}};
    return j;
}

// ---------------------------------------------------------------- commands

CommandResult cmd_spectrum(const RunConfig& c, bool gap_only)
{
    CommandResult out;
    Context ctx = prepare(c);
    const auto d = compute_spectrum(c, ctx);
    json doc = header(gap_only ? "gap" : "spectrum", c, ctx);
    doc["method"] = d.method;
    doc["gap"] = optional_number(d.result.gap);
    doc["steady_dim"] = d.result.steady_dim;
    doc["max_imag"] = d.result.max_imag;
    doc["real"] = d.result.max_imag <= c.tol.imag;
    if (!gap_only) {
        doc["eigenvalues"] = eigenvalue_list(d.result.eigenvalues);
        if (d.method == "blocks") {
            json blocks = json::array();
            for (std::size_t k = 0; k < d.blocks.size(); ++k) {
                blocks.push_back({{"index", k},
                                  {"key", key_to_json(d.blocks[k].key)},
                                  {"size", d.blocks[k].matrix.rows()},
                                  {"eigenvalues", eigenvalue_list(d.block_values[k])}});
            }
            doc["blocks"] = blocks;
        }
        out.table.push_back({"index", "re", "im"});
        for (std::size_t k = 0; k < d.result.eigenvalues.size(); ++k) {
            out.table.push_back({std::to_string(k), cell(d.result.eigenvalues[k].real()),
                                 cell(d.result.eigenvalues[k].imag())});
        }
    } else {
        out.table.push_back({"gap", "steady_dim", "max_imag", "real", "method"});
        out.table.push_back({cell(d.result.gap), std::to_string(d.result.steady_dim), cell(d.result.max_imag),
                             d.result.max_imag <= c.tol.imag ? "true" : "false", d.method});
    }
    out.document = std::move(doc);
    return out;
}

CommandResult cmd_blocks(const RunConfig& c)
{
    require_grading(c, "blocks");
    CommandResult out;
    Context ctx = prepare(c);
    const auto tri = triangularity(c, ctx);
    const auto blocks = extract_diagonal_blocks(ctx.matrix, *ctx.partition, c.tol.structural, true);
    json doc = header("blocks", c, ctx);
    doc["triangularity"] = triangularity_json(tri);
    json list = json::array();
    bool all_hermitian = true;
    out.table.push_back({"index", "total", "p_x", "p_y", "p_z", "aux_0", "aux_1", "rank", "size", "symmetry",
                         "hermitian_deviation"});
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        const auto h = hermiticity_check(blocks[k].matrix, c.tol.structural);
        all_hermitian = all_hermitian && h.kind == Symmetry::hermitian;
        const auto& key = blocks[k].key;
        list.push_back({{"index", k},
                        {"key", key_to_json(key)},
                        {"size", blocks[k].matrix.rows()},
                        {"symmetry", std::string(to_string(h.kind))},
                        {"hermitian_deviation", h.hermitian_deviation}});
        out.table.push_back({std::to_string(k), std::to_string(key.total), std::to_string(key.parities[0]),
                             std::to_string(key.parities[1]), std::to_string(key.parities[2]),
                             std::to_string(key.aux[0]), std::to_string(key.aux[1]), std::to_string(key.rank),
                             std::to_string(blocks[k].matrix.rows()), std::string(to_string(h.kind)),
                             cell(h.hermitian_deviation)});
    }
    doc["bth"] = tri.is_triangular && all_hermitian;
    doc["blocks"] = list;
    if (!tri.is_triangular) {
        out.exit_code = kExitStructure;
        out.messages.push_back("blocks: not block triangular, max violation " + format_double(tri.max_violation));
    }
    out.document = std::move(doc);
    return out;
}

CommandResult cmd_bounds(const RunConfig& c)
{
    require_grading(c, "bounds");
    CommandResult out;
    Context ctx = prepare(c);
    const auto blocks = triangular_blocks(c, ctx);
    json doc = header("bounds", c, ctx);
    doc["orientation"] = std::string(to_string(ctx.partition->orientation));
    std::vector<BlockBounds> all;
    json list = json::array();
    out.table.push_back({"index", "size", "exact_max_re", "mu_min", "mu_max", "gershgorin_rows", "gershgorin_cols",
                         "nu", "best_upper"});
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        const auto b = bound_block(blocks[k].matrix, c);
        json j;
        j["index"] = k;
        j["key"] = key_to_json(blocks[k].key);
        j["size"] = b.size;
        j["exact_max_re"] = optional_number(b.exact_max_re);
        j["hermitian"] = b.hermitian ? json{{"mu_min", *b.hermitian->mu_min}, {"mu_max", *b.hermitian->mu_max}}
                                     : json(nullptr);
        j["gershgorin_rows"] = bound_json(b.rows);
        j["gershgorin_cols"] = bound_json(b.cols);
        j["singular_value"] =
            b.singular ? json{{"nu", *b.singular->nu}, {"upper", b.singular->upper}, {"caveat", b.singular->caveat}}
                       : json(nullptr);
        j["best_upper"] = b.best_upper;
        j["steady"] = b.steady;
        list.push_back(j);
        out.table.push_back({std::to_string(k), std::to_string(b.size), cell(b.exact_max_re),
                             b.hermitian ? cell(*b.hermitian->mu_min) : "",
                             b.hermitian ? cell(*b.hermitian->mu_max) : "", cell(b.rows.upper), cell(b.cols.upper),
                             b.singular ? cell(*b.singular->nu) : "", cell(b.best_upper)});
        all.push_back(b);
    }
    doc["gap_lower_bound"] = optional_number(gap_lower_bound(all));
    doc["blocks"] = list;
    out.document = std::move(doc);
    return out;
}

struct CheckResult {
    std::string name;
    std::string status;  // pass | fail | skipped | info
    std::optional<double> worst;
    double tolerance = 0.0;
    std::string detail;
};

CommandResult cmd_verify(const RunConfig& c)
{
    CommandResult out;
    Context ctx = prepare(c);
    const auto& fam = *ctx.family;
    auto wanted = [&](const std::string& name) {
        return c.analyses.empty() || std::find(c.analyses.begin(), c.analyses.end(), name) != c.analyses.end();
    };
    auto explicitly = [&](const std::string& name) {
        return std::find(c.analyses.begin(), c.analyses.end(), name) != c.analyses.end();
    };
    std::vector<CheckResult> checks;
    auto verdict = [](bool ok) { return std::string(ok ? "pass" : "fail"); };

    if (wanted("biorthonormality")) {
        const double e = biorthonormality_error(ctx.matrix.basis);
        checks.push_back({"biorthonormality", verdict(e <= c.tol.structural), e, c.tol.structural,
                          "max |<<B_m|A_n>> - delta_mn|"});
    }
    if (wanted("trace_preservation")) {
        const Eigen::VectorXcd t = trace_functional(ctx.matrix.basis, c.lattice.sites);
        const Eigen::RowVectorXcd r = t.transpose() * ctx.matrix.entries;
        const double e = r.size() ? r.cwiseAbs().maxCoeff() : 0.0;
        checks.push_back({"trace_preservation", verdict(e <= c.tol.structural), e, c.tol.structural,
                          "max |t^T M| with t_n = Tr(A_n)"});
    }

    std::optional<TriangularityReport> tri;
    if (ctx.partition) tri = triangularity(c, ctx);
    const bool structured = tri && tri->is_triangular;
    std::vector<DiagonalBlock> blocks;
    if (structured) blocks = extract_diagonal_blocks(ctx.matrix, *ctx.partition, c.tol.structural, true);

    if (wanted("triangularity")) {
        if (!tri) {
            checks.push_back({"triangularity", "skipped", std::nullopt, c.tol.structural, "no grading"});
        } else {
            checks.push_back({"triangularity", verdict(tri->is_triangular), tri->max_violation, c.tol.structural,
                              std::string(to_string(tri->orientation)) + " block triangular, " +
                                  std::to_string(ctx.partition->block_count()) + " blocks"});
        }
    }
    if (wanted("hermiticity")) {
        if (!structured) {
            checks.push_back({"hermiticity", "skipped", std::nullopt, c.tol.structural, "no block structure"});
        } else {
            double worst = 0.0;
            std::size_t bad = 0;
            for (const auto& b : blocks) {
                const auto h = hermiticity_check(b.matrix, c.tol.structural);
                worst = std::max(worst, h.hermitian_deviation);
                bad += h.kind != Symmetry::hermitian;
            }
            const bool required = fam.hermitian_blocks || explicitly("hermiticity");
            const std::string status = bad == 0 ? "pass" : (required ? "fail" : "info");
            checks.push_back({"hermiticity", status, worst, c.tol.structural,
                              std::to_string(bad) + " of " + std::to_string(blocks.size()) +
                                  " diagonal blocks are not Hermitian"});
        }
    }
    if (wanted("weyl")) {
        if (!fam.weyl_split || !ctx.partition) {
            checks.push_back({"weyl", "skipped", std::nullopt, c.tol.weyl, "model has no BTH decomposition"});
        } else {
            const auto [m1, m2] = fam.weyl_split(ctx.parameters, c.lattice);
            const auto l1 = assemble(m1, c.lattice, ctx.matrix.basis);
            const auto l2 = assemble(m2, c.lattice, ctx.matrix.basis);
            try {
                const auto w = weyl_check(l1, l2, *ctx.partition, c.tol.structural, c.tol.weyl);
                checks.push_back({"weyl", verdict(w.holds), -w.worst_margin, c.tol.weyl,
                                  "worst margin at k = " + std::to_string(w.worst_index)});
            } catch (const StructureError& e) {
                checks.push_back({"weyl", "fail", std::nullopt, c.tol.weyl, e.what()});
            }
        }
    }
    if (wanted("bound_soundness")) {
        if (!structured) {
            checks.push_back({"bound_soundness", "skipped", std::nullopt, c.tol.bound, "no block structure"});
        } else {
            double worst = -std::numeric_limits<double>::infinity();
            for (const auto& b : blocks) {
                const auto bb = bound_block(b.matrix, c);
                if (bb.exact_max_re) worst = std::max(worst, *bb.exact_max_re - bb.best_upper);
            }
            checks.push_back({"bound_soundness", verdict(worst <= c.tol.bound), worst, c.tol.bound,
                              "max over blocks of exact max Re minus the tightest upper bound"});
        }
    }
    if (wanted("detailed_balance")) {
        if (!fam.reference_state) {
            checks.push_back({"detailed_balance", "skipped", std::nullopt, c.tol.balance, "no thermal reference"});
        } else {
            const auto r = detailed_balance_check(ctx.matrix, fam.reference_state(ctx.parameters, c.lattice),
                                                  c.tol.balance);
            checks.push_back({"detailed_balance", verdict(r.holds), r.residual, c.tol.balance,
                              "max |G L^+ - L G| in the matrix-unit basis"});
        }
    }

    json doc = header("verify", c, ctx);
    json list = json::array();
    bool ok = true;
    out.table.push_back({"check", "status", "worst", "tolerance", "detail"});
    for (const auto& k : checks) {
        list.push_back({{"name", k.name},
                        {"status", k.status},
                        {"worst", optional_number(k.worst)},
                        {"tolerance", k.tolerance},
                        {"detail", k.detail}});
        out.table.push_back({k.name, k.status, cell(k.worst), cell(k.tolerance), k.detail});
        if (k.status == "fail") {
            ok = false;
            out.messages.push_back("verify: " + k.name + " failed, worst violation " +
                                   (k.worst ? format_double(*k.worst) : std::string("n/a")) + " (" + k.detail + ")");
        }
    }
    doc["passed"] = ok;
    doc["checks"] = list;
    if (!ok) out.exit_code = kExitStructure;
    out.document = std::move(doc);
    return out;
}

struct SweepRow {
    json parameters;
    SpectrumResult spectrum;
    std::optional<double> bound;
    std::string method;
};

SweepRow sweep_point(const RunConfig& c, const json& point)
{
    SweepRow row;
    row.parameters = point;
    Context ctx = prepare(c, point);
    auto d = compute_spectrum(c, ctx);
    row.spectrum = std::move(d.result);
    row.method = d.method;
    if (ctx.partition) {
        const auto tri = triangularity(c, ctx);
        if (tri.is_triangular) {
            std::vector<BlockBounds> all;
            for (const auto& b : extract_diagonal_blocks(ctx.matrix, *ctx.partition, c.tol.structural, true)) {
                all.push_back(bound_block(b.matrix, c));
            }
            row.bound = gap_lower_bound(all);
        }
    }
    return row;
}

CommandResult cmd_sweep(const RunConfig& c, int threads)
{
    if (c.sweep.empty()) throw ConfigError("sweep needs a \"sweep\" object mapping parameters to value lists");
    std::vector<json> points{json::object()};
    for (const auto& axis : c.sweep) {
        std::vector<json> next;
        for (const auto& p : points) {
            for (double v : axis.values) {
                json q = p;
                q[axis.parameter] = v;
                next.push_back(q);
            }
        }
        points = std::move(next);
    }

    std::vector<SweepRow> rows(points.size());
    std::vector<std::exception_ptr> errors(points.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t k = next++; k < points.size(); k = next++) {
            try {
                rows[k] = sweep_point(c, points[k]);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    const std::size_t n_threads = std::clamp<std::size_t>(
        threads > 0 ? static_cast<std::size_t>(threads) : std::max(1u, std::thread::hardware_concurrency()), 1,
        std::max<std::size_t>(points.size(), 1));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    CommandResult out;
    Context ctx = prepare(c);
    json doc = header("sweep", c, ctx);
    json grid = json::object();
    for (const auto& axis : c.sweep) grid[axis.parameter] = axis.values;
    doc["grid"] = grid;
    json list = json::array();
    std::vector<std::string> head;
    for (const auto& axis : c.sweep) head.push_back(axis.parameter);
    for (const char* h : {"gap", "steady_dim", "max_imag", "real", "gap_lower_bound", "method"}) head.emplace_back(h);
    out.table.push_back(head);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto& r = rows[k];
        list.push_back({{"index", k},
                        {"parameters", r.parameters},
                        {"gap", optional_number(r.spectrum.gap)},
                        {"steady_dim", r.spectrum.steady_dim},
                        {"max_imag", r.spectrum.max_imag},
                        {"real", r.spectrum.max_imag <= c.tol.imag},
                        {"gap_lower_bound", optional_number(r.bound)},
                        {"method", r.method}});
        std::vector<std::string> line;
        for (const auto& axis : c.sweep) line.push_back(cell(r.parameters.at(axis.parameter).get<double>()));
        line.push_back(cell(r.spectrum.gap));
        line.push_back(std::to_string(r.spectrum.steady_dim));
        line.push_back(cell(r.spectrum.max_imag));
        line.push_back(r.spectrum.max_imag <= c.tol.imag ? "true" : "false");
        line.push_back(cell(r.bound));
        line.push_back(r.method);
        out.table.push_back(line);
    }
    doc["rows"] = list;
    out.document = std::move(doc);
    return out;
}

} // namespace

std::vector<std::string> command_names() { return {"spectrum", "gap", "blocks", "bounds", "verify", "sweep"}; }

CommandResult run_command(const std::string& command, const RunConfig& config, int threads)
{
    if (command == "spectrum") return cmd_spectrum(config, false);
    if (command == "gap") return cmd_spectrum(config, true);
    if (command == "blocks") return cmd_blocks(config);
    if (command == "bounds") return cmd_bounds(config);
    if (command == "verify") return cmd_verify(config);
    if (command == "sweep") return cmd_sweep(config, threads);
    throw ConfigError("unknown command \"" + command + "\"");
}

std::string to_csv(const std::vector<std::vector<std::string>>& table)
{
    std::ostringstream os;
    for (const auto& row : table) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            const bool quote = row[i].find_first_of(",\"\n") != std::string::npos;
            if (quote) {
                os << '"';
                for (char ch : row[i]) os << (ch == '"' ? "\"\"" : std::string(1, ch));
                os << '"';
            } else {
                os << row[i];
            }
        }
        os << '\n';
    }
    return os.str();
}

} // namespace lgap::cli
