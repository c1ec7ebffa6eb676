// spectra.cpp

#include "lgap/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lgap/errors.hpp"

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace lgap {

namespace {

// Eigenvalues of a general square matrix through LAPACK geev, using the real
// driver when every entry is real.
std::vector<cplx> geev(const Eigen::MatrixXcd& m)
{
    const lapack_int n = static_cast<lapack_int>(m.rows());
    std::vector<cplx> out(static_cast<std::size_t>(n));
    lapack_int info = 0;
    if (m.imag().cwiseAbs().maxCoeff() == 0.0) {
        Eigen::MatrixXd a = m.real();
        Eigen::VectorXd wr(n), wi(n);
        info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'N', n, a.data(), n, wr.data(), wi.data(), nullptr, 1, nullptr, 1);
        for (lapack_int k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = cplx(wr(k), wi(k));
    } else {
        Eigen::MatrixXcd a = m;
        info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, a.data(), n, out.data(), nullptr, 1, nullptr, 1);
    }
    if (info < 0) throw NumericalError("geev: invalid argument " + std::to_string(-info));
    if (info > 0) throw NumericalError("geev: QR iteration did not converge");
    return out;
}

} // namespace

void sort_spectrum(std::vector<cplx>& values)
{
    std::sort(values.begin(), values.end(), [](const cplx& a, const cplx& b) {
        if (a.real() != b.real()) return a.real() > b.real();
        if (std::abs(a.imag()) != std::abs(b.imag())) return std::abs(a.imag()) < std::abs(b.imag());
        return a.imag() < b.imag();
    });
}

std::vector<cplx> eigenvalues(const Eigen::MatrixXcd& m, std::size_t dense_limit)
{
    if (m.rows() != m.cols()) throw DimensionError("eigenvalues: matrix must be square");
    if (static_cast<std::size_t>(m.rows()) > dense_limit) {
        throw NumericalError("matrix of dimension " + std::to_string(m.rows()) + " exceeds the dense limit " +
                             std::to_string(dense_limit) + "; decompose into diagonal blocks first");
    }
    if (m.size() == 0) return {};
    if (m.rows() == 1) return {m(0, 0)};
    if (m.rows() == 2) {
        // closed form keeps exceptional points exact: m +- sqrt(((a-d)/2)^2 + bc)
        const cplx mean = 0.5 * (m(0, 0) + m(1, 1));
        const cplx half = 0.5 * (m(0, 0) - m(1, 1));
        const cplx root = std::sqrt(half * half + m(0, 1) * m(1, 0));
        std::vector<cplx> out{mean + root, mean - root};
        sort_spectrum(out);
        return out;
    }
    if (!m.allFinite()) throw NumericalError("eigenvalues: matrix has non-finite entries");
    auto out = geev(m);
    sort_spectrum(out);
    return out;
}

std::vector<cplx> block_eigenvalues(const Eigen::MatrixXcd& block, double hermitian_tol)
{
    if (block.size() == 0) return {};
    if (hermiticity_check(block, hermitian_tol).kind != Symmetry::hermitian) return eigenvalues(block);
    const Eigen::MatrixXcd h = 0.5 * (block + block.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver did not converge");
    std::vector<cplx> out;
    out.reserve(static_cast<std::size_t>(h.rows()));
    for (Eigen::Index k = 0; k < h.rows(); ++k) out.emplace_back(es.eigenvalues()(k), 0.0);
    sort_spectrum(out);
    return out;
}

GapResult spectral_gap(std::span<const cplx> spectrum, double tol)
{
    GapResult r;
    double top = -std::numeric_limits<double>::infinity();
    for (const auto& l : spectrum) {
        if (std::abs(l.real()) <= tol && std::abs(l.imag()) <= tol) ++r.steady_dim;
        if (l.real() < -tol) top = std::max(top, l.real());
    }
    if (std::isfinite(top)) r.gap = -top;
    return r;
}

SpectrumResult summarize_spectrum(std::vector<cplx> values, double tol)
{
    sort_spectrum(values);
    SpectrumResult r;
    const auto g = spectral_gap(values, tol);
    r.gap = g.gap;
    r.steady_dim = g.steady_dim;
    for (const auto& l : values) r.max_imag = std::max(r.max_imag, std::abs(l.imag()));
    r.eigenvalues = std::move(values);
    return r;
}

SpectrumResult block_spectrum(std::span<const DiagonalBlock> blocks, double tol)
{
    std::vector<cplx> all;
    for (const auto& b : blocks) {
        auto ev = block_eigenvalues(b.matrix);
        all.insert(all.end(), ev.begin(), ev.end());
    }
    return summarize_spectrum(std::move(all), tol);
}

std::string_view to_string(BoundMethod m)
{
    switch (m) {
    case BoundMethod::hermitian_component: return "hermitian_component";
    case BoundMethod::gershgorin_rows: return "gershgorin_rows";
    case BoundMethod::gershgorin_cols: return "gershgorin_cols";
    case BoundMethod::singular_value: return "singular_value";
    }
    return "?";
}

BoundReport hermitian_component_bounds(const Eigen::MatrixXcd& block)
{
    if (block.rows() != block.cols() || block.size() == 0) throw DimensionError("bounds need a non-empty square block");
    const Eigen::MatrixXcd h = 0.5 * (block + block.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver did not converge");
    BoundReport r;
    r.method = BoundMethod::hermitian_component;
    r.mu_min = es.eigenvalues().minCoeff();
    r.mu_max = es.eigenvalues().maxCoeff();
    r.upper = *r.mu_max;
    r.lower = *r.mu_min;
    return r;
}

BoundReport gershgorin_bound(const Eigen::MatrixXcd& block, GershgorinMode mode)
{
    if (block.rows() != block.cols() || block.size() == 0) throw DimensionError("bounds need a non-empty square block");
    BoundReport r;
    r.method = mode == GershgorinMode::rows ? BoundMethod::gershgorin_rows : BoundMethod::gershgorin_cols;
    const Eigen::MatrixXd mag = block.cwiseAbs();
    double upper = -std::numeric_limits<double>::infinity();
    double lower = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < block.rows(); ++i) {
        const double sum = mode == GershgorinMode::rows ? mag.row(i).sum() : mag.col(i).sum();
        const double radius = std::max(0.0, sum - mag(i, i));
        r.disk_centers.push_back(block(i, i));
        r.disk_radii.push_back(radius);
        upper = std::max(upper, block(i, i).real() + radius);
        lower = std::min(lower, block(i, i).real() - radius);
    }
    r.upper = upper;
    r.lower = lower;
    return r;
}

BoundReport smallest_singular_value(const Eigen::MatrixXcd& block)
{
    if (block.rows() != block.cols() || block.size() == 0) throw DimensionError("bounds need a non-empty square block");
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(block);
    BoundReport r;
    r.method = BoundMethod::singular_value;
    r.nu = svd.singularValues().minCoeff();
    r.upper = -*r.nu;
    r.caveat = true;
    return r;
}

namespace {

std::vector<double> bth_real_spectrum(const SuperMatrix& m, const BlockPartition& p, double tol, const char* which)
{
    const auto tri = verify_block_triangular(m, p, tol);
    if (!tri.is_triangular) {
        throw StructureError(std::string(which) + " is not block triangular in the given partition");
    }
    std::vector<double> out;
    for (const auto& b : extract_diagonal_blocks(m, p, tol, true)) {
        if (hermiticity_check(b.matrix, tol).kind != Symmetry::hermitian) {
            throw StructureError(std::string(which) + " has a non-Hermitian diagonal block; Weyl ordering needs real spectra");
        }
        for (const auto& l : block_eigenvalues(b.matrix, tol)) out.push_back(l.real());
    }
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

} // namespace

WeylReport weyl_check(const SuperMatrix& l1, const SuperMatrix& l2, const BlockPartition& p, double structural_tol,
                      double margin_tol)
{
    WeylReport r;
    r.spectrum_1 = bth_real_spectrum(l1, p, structural_tol, "L1");
    r.spectrum_2 = bth_real_spectrum(l2, p, structural_tol, "L2");
    r.spectrum_sum = bth_real_spectrum(l1 + l2, p, structural_tol, "L1 + L2");

    const double min2 = r.spectrum_2.empty() ? 0.0 : r.spectrum_2.back();
    r.worst_margin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < r.spectrum_sum.size(); ++k) {
        const double lk = r.spectrum_sum[k];
        const double margin = std::min({r.spectrum_1[k] - lk, r.spectrum_2[k] - lk, lk - (r.spectrum_1[k] + min2)});
        if (margin < r.worst_margin) {
            r.worst_margin = margin;
            r.worst_index = k;
        }
    }
    r.holds = r.worst_margin >= -margin_tol;
    return r;
}

DetailedBalanceReport detailed_balance_check(const SuperMatrix& l, const Eigen::MatrixXcd& rho, double tol)
{
    const auto d = static_cast<Eigen::Index>(std::size_t{1} << l.lattice.sites);
    if (rho.rows() != d || rho.cols() != d) throw DimensionError("reference state has the wrong dimension");
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kStructuralTol) {
        throw StructureError("reference state is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
    const Eigen::VectorXd w = es.eigenvalues();
    if (!(w.minCoeff() > 1e-12 * std::max(1.0, w.maxCoeff()))) {
        throw StructureError("reference state is not positive definite (rank deficient)");
    }
    const Eigen::MatrixXcd root =
        es.eigenvectors() * w.cwiseSqrt().cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();

    const Eigen::MatrixXcd s = to_matrix_units(l);
    const Eigen::MatrixXcd g = sandwich_superop(root, root);
    // Heisenberg-picture generator is s^+; detailed balance is G s^+ = s G.
    DetailedBalanceReport r;
    r.residual = (g * s.adjoint() - s * g).cwiseAbs().maxCoeff();
    r.holds = r.residual <= tol;
    return r;
}

double dispersion_z(std::span<const double> k, double gamma_x, double gamma_f)
{
    double sum = 0.0;
    for (double ka : k) sum += 1.0 - std::cos(ka);
    return -gamma_x / 2.0 - 2.0 * gamma_f * sum;
}

double dispersion_y(std::span<const double> k, double gamma_x, double gamma_f, double gamma_z)
{
    double sum = 0.0;
    for (double ka : k) sum += 1.0 + std::cos(ka);
    return -gamma_x / 2.0 - 2.0 * gamma_f * sum - 2.0 * gamma_z;
}

std::pair<cplx, cplx> single_site_field_eigs(double h_y)
{
    const cplx root = std::sqrt(cplx(1.0 / 16.0 - 4.0 * h_y * h_y, 0.0));
    return {-0.75 + root, -0.75 - root};
}

} // namespace lgap
