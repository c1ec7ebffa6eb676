// blockstruct.hpp: graded orderings of the product basis, block
// triangularity checks and diagonal block extraction

#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "lgap/liouville.hpp"
#include "lgap/opspace.hpp"

namespace lgap {

enum class Orientation { lower, upper };

std::string_view to_string(Orientation o);

/// Contiguous blocks of a permuted product basis.
/// permutation[k] is the original index placed at position k.
struct BlockPartition {
    std::vector<std::size_t> permutation;
    /// boundaries.front() == 0, boundaries.back() == dim, strictly ascending
    std::vector<std::size_t> boundaries;
    Orientation orientation = Orientation::lower;
    GradingRule rule = GradingRule::particle_xyz;
    bool sector_split = false;
    /// one key per block (rank/parities are meaningful only when sector_split)
    std::vector<GradeKey> keys;
    int sites = 0;

    std::size_t dim() const { return permutation.size(); }
    std::size_t block_count() const { return keys.size(); }
    std::size_t block_size(std::size_t b) const { return boundaries[b + 1] - boundaries[b]; }

    /// position[original index] = permuted position
    std::vector<std::size_t> positions() const;
    /// block id of every original index
    std::vector<std::size_t> block_of_index() const;
};

/// Sorts labels by (total, sector rank, label) and cuts blocks at every change
/// of total (and of the sector when sector_split). Orientation is upper for
/// ketbra_updown and lower otherwise.
BlockPartition grade_ordering(const LocalBasis& basis, const Lattice& lattice, GradingRule rule,
                              bool sector_split);

struct TriangularityReport {
    bool is_triangular = true;
    double max_violation = 0.0;
    /// (row, column) of the worst entry in the forbidden triangle, original indices
    std::optional<std::pair<std::size_t, std::size_t>> worst_entry;
    Orientation orientation = Orientation::lower;
};

/// Checks that every entry in the forbidden triangle (above the diagonal
/// blocks for lower, below for upper) is at most tol in magnitude. Uses the
/// partition's orientation unless one is given.
TriangularityReport verify_block_triangular(const SuperMatrix& m, const BlockPartition& p,
                                            double tol = kStructuralTol,
                                            std::optional<Orientation> orientation = std::nullopt);

/// Tests both orientations; returns the first that holds (lower preferred),
/// or the report of the partition's own orientation when neither does.
TriangularityReport detect_block_triangular(const SuperMatrix& m, const BlockPartition& p,
                                            double tol = kStructuralTol);

struct DiagonalBlock {
    GradeKey key;
    std::size_t begin = 0;  // position range in the permuted order
    std::size_t end = 0;
    Eigen::MatrixXcd matrix;
};

/// Throws StructureError when the matrix is not block triangular and
/// `override_check` is false.
std::vector<DiagonalBlock> extract_diagonal_blocks(const SuperMatrix& m, const BlockPartition& p,
                                                   double tol = kStructuralTol, bool override_check = false);

/// Single diagonal block, without a triangularity check.
Eigen::MatrixXcd extract_block(const SuperMatrix& m, const BlockPartition& p, std::size_t block);

/// Index of the first block whose key satisfies `pred`, if any.
template <class Pred>
std::optional<std::size_t> find_block(const BlockPartition& p, Pred pred)
{
    for (std::size_t b = 0; b < p.block_count(); ++b) {
        if (pred(p.keys[b])) return b;
    }
    return std::nullopt;
}

enum class Symmetry { hermitian, anti_hermitian, neither };

std::string_view to_string(Symmetry s);

struct HermiticityReport {
    Symmetry kind = Symmetry::neither;
    double hermitian_deviation = 0.0;       // max |M - M^+|
    double anti_hermitian_deviation = 0.0;  // max |M + M^+|
};

HermiticityReport hermiticity_check(const Eigen::MatrixXcd& block, double tol = kStructuralTol);

} // namespace lgap
