// blockstruct.cpp

#include "lgap/blockstruct.hpp"

#include <algorithm>
#include <numeric>

#include "lgap/errors.hpp"

namespace lgap {

std::string_view to_string(Orientation o) { return o == Orientation::lower ? "lower" : "upper"; }

std::string_view to_string(Symmetry s)
{
    switch (s) {
    case Symmetry::hermitian: return "hermitian";
    case Symmetry::anti_hermitian: return "anti_hermitian";
    case Symmetry::neither: return "neither";
    }
    return "?";
}

std::vector<std::size_t> BlockPartition::positions() const
{
    std::vector<std::size_t> pos(permutation.size());
    for (std::size_t k = 0; k < permutation.size(); ++k) pos[permutation[k]] = k;
    return pos;
}

std::vector<std::size_t> BlockPartition::block_of_index() const
{
    std::vector<std::size_t> out(permutation.size());
    for (std::size_t b = 0; b + 1 < boundaries.size(); ++b) {
        for (std::size_t k = boundaries[b]; k < boundaries[b + 1]; ++k) out[permutation[k]] = b;
    }
    return out;
}

BlockPartition grade_ordering(const LocalBasis& /*basis*/, const Lattice& lattice, GradingRule rule,
                              bool sector_split)
{
    const std::size_t dim = operator_space_dim(lattice.sites);

    struct Entry {
        GradeKey key;
        ProductLabel label;
        std::size_t index;
    };
    std::vector<Entry> entries;
    entries.reserve(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        auto label = ProductLabel::decode(i, lattice.sites);
        entries.push_back({grade(label, rule), std::move(label), i});
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.key.total != b.key.total) return a.key.total < b.key.total;
        if (a.key.rank != b.key.rank) return a.key.rank < b.key.rank;
        return a.label < b.label;
    });

    BlockPartition p;
    p.rule = rule;
    p.sector_split = sector_split;
    p.sites = lattice.sites;
    p.orientation = rule == GradingRule::ketbra_updown ? Orientation::upper : Orientation::lower;
    p.permutation.reserve(dim);

    auto same_block = [sector_split](const GradeKey& a, const GradeKey& b) {
        return a.total == b.total && (!sector_split || a.rank == b.rank);
    };
    for (std::size_t k = 0; k < entries.size(); ++k) {
        if (k == 0 || !same_block(entries[k - 1].key, entries[k].key)) {
            p.boundaries.push_back(k);
            GradeKey key = entries[k].key;
            if (!sector_split) {
                key.parities = {0, 0, 0};
                key.aux = {0, 0};
                key.rank = 0;
            } else if (rule == GradingRule::nynz) {
                key.aux = {0, 0};
            }
            p.keys.push_back(key);
        }
        p.permutation.push_back(entries[k].index);
    }
    p.boundaries.push_back(dim);
    return p;
}

TriangularityReport verify_block_triangular(const SuperMatrix& m, const BlockPartition& p, double tol,
                                            std::optional<Orientation> orientation)
{
    if (m.dim() != p.dim()) throw DimensionError("partition does not match the superoperator dimension");
    TriangularityReport report;
    report.orientation = orientation.value_or(p.orientation);
    const auto block = p.block_of_index();
    for (Eigen::Index col = 0; col < m.entries.outerSize(); ++col) {
        for (Eigen::SparseMatrix<cplx>::InnerIterator it(m.entries, col); it; ++it) {
            const std::size_t br = block[static_cast<std::size_t>(it.row())];
            const std::size_t bc = block[static_cast<std::size_t>(it.col())];
            const bool forbidden = report.orientation == Orientation::lower ? br < bc : br > bc;
            if (!forbidden) continue;
            const double mag = std::abs(it.value());
            if (mag > report.max_violation) {
                report.max_violation = mag;
                report.worst_entry = std::pair{static_cast<std::size_t>(it.row()), static_cast<std::size_t>(it.col())};
            }
        }
    }
    report.is_triangular = report.max_violation <= tol;
    return report;
}

TriangularityReport detect_block_triangular(const SuperMatrix& m, const BlockPartition& p, double tol)
{
    auto lower = verify_block_triangular(m, p, tol, Orientation::lower);
    if (lower.is_triangular) return lower;
    auto upper = verify_block_triangular(m, p, tol, Orientation::upper);
    if (upper.is_triangular) return upper;
    return p.orientation == Orientation::lower ? lower : upper;
}

std::vector<DiagonalBlock> extract_diagonal_blocks(const SuperMatrix& m, const BlockPartition& p, double tol,
                                                   bool override_check)
{
    if (!override_check) {
        const auto report = verify_block_triangular(m, p, tol);
        if (!report.is_triangular) {
            throw StructureError("superoperator is not block triangular in the requested ordering (max violation " +
                                 std::to_string(report.max_violation) + ")");
        }
    }
    if (m.dim() != p.dim()) throw DimensionError("partition does not match the superoperator dimension");

    std::vector<DiagonalBlock> blocks(p.block_count());
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        blocks[b].key = p.keys[b];
        blocks[b].begin = p.boundaries[b];
        blocks[b].end = p.boundaries[b + 1];
        const auto n = static_cast<Eigen::Index>(p.block_size(b));
        blocks[b].matrix = Eigen::MatrixXcd::Zero(n, n);
    }
    const auto pos = p.positions();
    const auto block = p.block_of_index();
    for (Eigen::Index col = 0; col < m.entries.outerSize(); ++col) {
        for (Eigen::SparseMatrix<cplx>::InnerIterator it(m.entries, col); it; ++it) {
            const std::size_t r = static_cast<std::size_t>(it.row());
            const std::size_t c = static_cast<std::size_t>(it.col());
            const std::size_t b = block[r];
            if (b != block[c]) continue;
            const auto off = p.boundaries[b];
            blocks[b].matrix(static_cast<Eigen::Index>(pos[r] - off), static_cast<Eigen::Index>(pos[c] - off)) =
                it.value();
        }
    }
    return blocks;
}

Eigen::MatrixXcd extract_block(const SuperMatrix& m, const BlockPartition& p, std::size_t block)
{
    if (block >= p.block_count()) throw DimensionError("block index out of range");
    if (m.dim() != p.dim()) throw DimensionError("partition does not match the superoperator dimension");
    const std::size_t begin = p.boundaries[block];
    const auto n = static_cast<Eigen::Index>(p.block_size(block));
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto col = static_cast<Eigen::Index>(p.permutation[begin + static_cast<std::size_t>(j)]);
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto row = static_cast<Eigen::Index>(p.permutation[begin + static_cast<std::size_t>(i)]);
            out(i, j) = m.entries.coeff(row, col);
        }
    }
    return out;
}

HermiticityReport hermiticity_check(const Eigen::MatrixXcd& block, double tol)
{
    if (block.rows() != block.cols()) throw DimensionError("hermiticity_check: block must be square");
    HermiticityReport r;
    if (block.size() == 0) {
        r.kind = Symmetry::hermitian;
        return r;
    }
    r.hermitian_deviation = (block - block.adjoint()).cwiseAbs().maxCoeff();
    r.anti_hermitian_deviation = (block + block.adjoint()).cwiseAbs().maxCoeff();
    if (r.hermitian_deviation <= tol) {
        r.kind = Symmetry::hermitian;
    } else if (r.anti_hermitian_deviation <= tol) {
        r.kind = Symmetry::anti_hermitian;
    } else {
        r.kind = Symmetry::neither;
    }
    return r;
}

} // namespace lgap
