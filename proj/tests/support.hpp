// Shared helpers for the test suites: random inputs and a brute-force
// Liouvillian built from column-stacked Kronecker products. The brute-force
// path shares no code with the term-local assembly in lgap_core.

#pragma once

#include <algorithm>
#include <complex>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "lgap/liouville.hpp"

namespace lgap::testing {

using cplx = std::complex<double>;

inline Eigen::MatrixXcd random_matrix(std::mt19937& rng, Eigen::Index rows, Eigen::Index cols)
{
    std::normal_distribution<double> g;
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = cplx(g(rng), g(rng));
    return m;
}

inline Eigen::MatrixXcd random_density(std::mt19937& rng, Eigen::Index dim)
{
    const Eigen::MatrixXcd a = random_matrix(rng, dim, dim);
    Eigen::MatrixXcd rho = a * a.adjoint();
    return rho / rho.trace();
}

inline Eigen::MatrixXcd random_hermitian(std::mt19937& rng, Eigen::Index dim)
{
    const Eigen::MatrixXcd a = random_matrix(rng, dim, dim);
    return 0.5 * (a + a.adjoint());
}

inline double max_abs(const Eigen::MatrixXcd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

/// Kronecker product a (x) b with a acting on the more significant factor.
inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b)
{
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// Single-site operator on `site` of an n-site register (site 0 least significant).
inline Eigen::MatrixXcd site_op(const Eigen::Matrix2cd& op, int site, int n)
{
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
    for (int s = n - 1; s >= 0; --s) {
        out = kron(out, s == site ? Eigen::MatrixXcd(op) : Eigen::MatrixXcd(Eigen::Matrix2cd::Identity()));
    }
    return out;
}

inline Eigen::VectorXcd vec_cols(const Eigen::MatrixXcd& x)
{
    return Eigen::Map<const Eigen::VectorXcd>(x.data(), x.size());
}

/// Column-stacked Lindblad superoperator: vec(L(rho)) = S vec(rho).
inline Eigen::MatrixXcd brute_superop(const Eigen::MatrixXcd& h, const std::vector<std::pair<double, Eigen::MatrixXcd>>& jumps)
{
    const auto d = h.rows();
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
    const cplx i(0.0, 1.0);
    Eigen::MatrixXcd s = -i * (kron(id, h) - kron(h.transpose(), id));
    for (const auto& [rate, l] : jumps) {
        const Eigen::MatrixXcd k = l.adjoint() * l;
        s += rate * (kron(l.conjugate(), l) - 0.5 * kron(id, k) - 0.5 * kron(k.transpose(), id));
    }
    return s;
}

inline Eigen::MatrixXcd brute_superop(const Model& model, int n)
{
    std::vector<std::pair<double, Eigen::MatrixXcd>> jumps;
    for (const auto& t : model.jumps) jumps.emplace_back(t.rate, embed(t.op, n));
    return brute_superop(hamiltonian_matrix(model, n), jumps);
}

/// Product of single-site frame elements, built from explicit Kronecker factors.
inline Eigen::MatrixXcd brute_product(const ProductLabel& label, const Frame& frame)
{
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
    for (int s = label.sites() - 1; s >= 0; --s) out = kron(out, Eigen::MatrixXcd(frame[label[s]]));
    return out;
}

/// Matrix elements Tr(B_m^+ L(A_n)) by brute force over all product labels.
inline Eigen::MatrixXcd brute_basis_matrix(const Model& model, int n, const LocalBasis& basis)
{
    const Eigen::MatrixXcd s = brute_superop(model, n);
    const std::size_t dim = operator_space_dim(n);
    Eigen::MatrixXcd left(s.rows(), static_cast<Eigen::Index>(dim));
    Eigen::MatrixXcd right(s.rows(), static_cast<Eigen::Index>(dim));
    for (std::size_t k = 0; k < dim; ++k) {
        const auto label = ProductLabel::decode(k, n);
        left.col(static_cast<Eigen::Index>(k)) = vec_cols(brute_product(label, basis.left));
        right.col(static_cast<Eigen::Index>(k)) = vec_cols(brute_product(label, basis.right));
    }
    return left.adjoint() * s * right;
}

/// Sorted copy for multiset comparisons: real part, then imaginary part.
inline std::vector<cplx> lex_sorted(std::vector<cplx> v)
{
    std::sort(v.begin(), v.end(), [](const cplx& a, const cplx& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return v;
}

/// Greedy nearest matching; returns the worst distance. Robust to ordering
/// noise among nearly equal real parts.
inline double multiset_distance(std::vector<cplx> a, std::vector<cplx> b)
{
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    std::vector<bool> used(b.size(), false);
    for (const auto& x : a) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t arg = 0;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (used[j]) continue;
            const double dist = std::abs(x - b[j]);
            if (dist < best) {
                best = dist;
                arg = j;
            }
        }
        used[arg] = true;
        worst = std::max(worst, best);
    }
    return worst;
}

} // namespace lgap::testing
