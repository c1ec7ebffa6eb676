// spectra.hpp: eigenvalues, Liouville gaps, rigorous bounds on eigenvalue
// real parts, Weyl ordering and detailed balance checks

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "lgap/blockstruct.hpp"
#include "lgap/liouville.hpp"

namespace lgap {

/// Absolute threshold separating zero eigenvalues (steady states) from gaps.
inline constexpr double kZeroTol = 1e-9;
/// Largest matrix handed to the dense eigensolver.
inline constexpr std::size_t kDenseLimit = 4096;

/// Descending real part, ties by ascending |Im|, then ascending Im.
void sort_spectrum(std::vector<cplx>& values);

/// Full spectrum of a dense matrix (LAPACK geev, no eigenvectors), sorted.
/// 1x1 and 2x2 inputs use the closed form.
std::vector<cplx> eigenvalues(const Eigen::MatrixXcd& m, std::size_t dense_limit = kDenseLimit);

/// Block spectrum: symmetric solver when the block is Hermitian within tol,
/// otherwise the general solver. Sorted.
std::vector<cplx> block_eigenvalues(const Eigen::MatrixXcd& block, double hermitian_tol = kStructuralTol);

struct GapResult {
    /// -max{Re l : Re l < -tol}; empty when no eigenvalue decays
    std::optional<double> gap;
    int steady_dim = 0;
};

GapResult spectral_gap(std::span<const cplx> spectrum, double tol = kZeroTol);

struct SpectrumResult {
    std::vector<cplx> eigenvalues;
    std::optional<double> gap;
    int steady_dim = 0;
    /// max |Im l|
    double max_imag = 0.0;
};

SpectrumResult summarize_spectrum(std::vector<cplx> values, double tol = kZeroTol);

/// Spectrum of the full matrix from its diagonal blocks (exact when the
/// matrix is block triangular).
SpectrumResult block_spectrum(std::span<const DiagonalBlock> blocks, double tol = kZeroTol);

enum class BoundMethod { hermitian_component, gershgorin_rows, gershgorin_cols, singular_value };

std::string_view to_string(BoundMethod m);

/// Bound on the eigenvalue real parts of one block.
struct BoundReport {
    BoundMethod method = BoundMethod::hermitian_component;
    /// Upper bound on max Re l. For singular_value this is -nu, which equals
    /// max Re l only when the extremal eigenvalue is real (see `caveat`).
    double upper = 0.0;
    /// Lower bound on min Re l (hermitian_component: mu_min; gershgorin:
    /// min_i (Re M_ii - R_i)).
    std::optional<double> lower;
    std::vector<cplx> disk_centers;
    std::vector<double> disk_radii;
    std::optional<double> mu_min, mu_max, nu;
    /// Set for singular values: nu only bounds the gap contribution from
    /// above unless the extremal eigenvalue is known to be real.
    bool caveat = false;
};

/// mu_max >= Re l_k >= mu_min from the extreme eigenvalues of (M + M^+)/2.
BoundReport hermitian_component_bounds(const Eigen::MatrixXcd& block);

enum class GershgorinMode { rows, cols };

BoundReport gershgorin_bound(const Eigen::MatrixXcd& block, GershgorinMode mode);

BoundReport smallest_singular_value(const Eigen::MatrixXcd& block);

struct WeylReport {
    bool holds = false;
    /// min over k of both inequality margins (>= 0 when they hold)
    double worst_margin = 0.0;
    std::size_t worst_index = 0;
    /// descending real spectra of L1 + L2, L1, L2
    std::vector<double> spectrum_sum, spectrum_1, spectrum_2;
};

/// Checks l_k <= l_k^(i) and l_k >= l_k^(1) + min_q l_q^(2) for the
/// descending spectra of L = L1 + L2. Both operands (and their sum) must be
/// block triangular with Hermitian blocks in `p`; otherwise StructureError.
WeylReport weyl_check(const SuperMatrix& l1, const SuperMatrix& l2, const BlockPartition& p,
                      double structural_tol = kStructuralTol, double margin_tol = 1e-9);

struct DetailedBalanceReport {
    bool holds = false;
    /// max |G L^+ - L G| in the matrix-unit basis
    double residual = 0.0;
};

/// G_b K = K^+ G_b for the Heisenberg-picture generator K = L^+, with
/// G_b(X) = rho^{1/2} X rho^{1/2}; equivalently L G_b = G_b L^+. This is the
/// form compatible with L(rho) = 0. Throws StructureError unless rho is
/// Hermitian positive definite.
DetailedBalanceReport detailed_balance_check(const SuperMatrix& l, const Eigen::MatrixXcd& rho, double tol = 1e-10);

/// Single z-particle dispersion of the Z2 model on a hypercubic lattice.
double dispersion_z(std::span<const double> k, double gamma_x, double gamma_f);
/// Single y-particle dispersion of the Z2 model.
double dispersion_y(std::span<const double> k, double gamma_x, double gamma_f, double gamma_z);
/// Central-block eigenvalues -3/4 +- sqrt(1/16 - 4 h^2) of emission plus a
/// y field, larger real part first.
std::pair<cplx, cplx> single_site_field_eigs(double h_y);

} // namespace lgap
