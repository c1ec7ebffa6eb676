// opspace.hpp: single-site operator frames, biorthonormal duals, product
// labels and grading rules for the 4^N-dimensional operator space.

#pragma once

#include <array>
#include <complex>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace lgap {

using cplx = std::complex<double>;
using LocalOperator = Eigen::Matrix2cd;
using Frame = std::array<LocalOperator, 4>;

/// Threshold for structural-zero checks (triangularity, Hermiticity, ...).
inline constexpr double kStructuralTol = 1e-10;

/// Gram condition number above which dual_basis warns.
inline constexpr double kIllConditionedGram = 1e8;

// Single-site building blocks. Index 0 is |up>, index 1 is |down>.
namespace ops {
LocalOperator identity();
LocalOperator sigma_x();
LocalOperator sigma_y();
LocalOperator sigma_z();
LocalOperator sigma_plus();   // |up><down|
LocalOperator sigma_minus();  // |down><up|
LocalOperator proj_up();
LocalOperator proj_down();
LocalOperator proj_right();   // |->><->|, sigma_x eigenvalue +1
LocalOperator proj_left();    // |<-><<-|, sigma_x eigenvalue -1
LocalOperator sigma_x_plus(); // |->><<-|
} // namespace ops

/// Hilbert-Schmidt inner product <<b|a>> = Tr(b^dagger a).
cplx hs_inner(const Eigen::MatrixXcd& b, const Eigen::MatrixXcd& a);

enum class BasisKind { pauli, bx, bx_prime, bz };

/// A right frame together with its biorthonormal left duals,
/// Tr(left[m]^dagger right[n]) = delta_mn.
struct LocalBasis {
    std::string name;
    Frame right;
    Frame left;
    double gram_condition = 1.0;
};

/// Left duals of `right` from the inverse Gram matrix. Throws BasisDegenerate
/// for a singular frame; writes a warning to std::clog when the Gram condition
/// number exceeds kIllConditionedGram. `condition` receives that number.
Frame dual_basis(const Frame& right, double* condition = nullptr);

LocalBasis make_local_basis(BasisKind kind);
LocalBasis make_custom_basis(std::string name, const Frame& right);

/// Built-in basis by identifier: "pauli", "bx", "bx_prime", "bz".
LocalBasis basis_by_name(std::string_view name);
std::vector<std::string> basis_names();

/// max_{m,n} |Tr(left[m]^dagger right[n]) - delta_mn|
double biorthonormality_error(const LocalBasis& basis);
bool check_biorthonormality(const LocalBasis& basis, double tol);

/// Site letters of a product basis element. Site 0 is the least significant
/// base-4 digit of the linear index.
class ProductLabel {
public:
    ProductLabel() = default;
    explicit ProductLabel(std::vector<std::uint8_t> letters);

    static ProductLabel decode(std::size_t index, int n_sites);
    std::size_t encode() const;

    int sites() const { return static_cast<int>(letters_.size()); }
    std::uint8_t operator[](int site) const { return letters_[static_cast<std::size_t>(site)]; }
    std::span<const std::uint8_t> letters() const { return letters_; }

    /// Letters joined by the given per-letter symbols, site 0 first.
    std::string to_string(const std::array<std::string_view, 4>& symbols = {"0", "1", "2", "3"}) const;

    auto operator<=>(const ProductLabel&) const = default;

private:
    std::vector<std::uint8_t> letters_;
};

/// 4^n, throwing DimensionError when it does not fit into size_t.
std::size_t operator_space_dim(int n_sites);

enum class GradingRule {
    /// letters 1,2,3 are x, z, y particles (as in the bx / bx_prime frames)
    particle_xyz,
    /// letters 1 (sigma_z) and 3 (sigma_y) of the Pauli frame count
    nynz,
    /// bz frame: (N_ket, N_bra) = (0,0), (1,1), (1,0), (0,1)
    ketbra_updown,
};

std::string_view to_string(GradingRule rule);
GradingRule grading_by_name(std::string_view name);

struct GradeKey {
    int total = 0;
    /// (P_x, P_y, P_z) for particle_xyz, zeros otherwise
    std::array<int, 3> parities{0, 0, 0};
    /// (N_k, N_b) for ketbra_updown, (N_z, N_y) for nynz, zeros otherwise
    std::array<int, 2> aux{0, 0};
    /// Sector rank inside a fixed total.
    int rank = 0;

    auto operator<=>(const GradeKey&) const = default;
};

/// Throws DimensionError if a letter is outside [0,4).
GradeKey grade(const ProductLabel& label, GradingRule rule);

} // namespace lgap
