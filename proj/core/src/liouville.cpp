// liouville.cpp: term-local superoperator assembly and the direct
// Hilbert-space oracle

#include "lgap/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "lgap/errors.hpp"

namespace lgap {

namespace {

using Matrix = Eigen::MatrixXcd;

constexpr double kDropTol = 1e-14;

std::size_t hilbert_dim(std::size_t s) { return std::size_t{1} << s; }

/// Matrix-unit index of E_ab on s sites: per site digit 2*a_i + b_i.
std::size_t interleave(std::size_t a, std::size_t b, std::size_t s)
{
    std::size_t p = 0;
    for (std::size_t i = 0; i < s; ++i) {
        const std::size_t digit = 2 * ((a >> i) & 1u) + ((b >> i) & 1u);
        p |= digit << (2 * i);
    }
    return p;
}

/// Per-site 4x4 frame matrix w(p, n) = frame[n](a, b) with p = 2a + b.
Eigen::Matrix4cd frame_matrix(const Frame& frame)
{
    Eigen::Matrix4cd w;
    for (int n = 0; n < 4; ++n) {
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) w(2 * a + b, n) = frame[n](a, b);
        }
    }
    return w;
}

/// X <- (U (x) ... (x) U) X, one factor per base-4 digit of the row index.
void kron_transform_rows(Matrix& x, const Eigen::Matrix4cd& u, std::size_t digits)
{
    const Eigen::Index cols = x.cols();
    Eigen::Matrix<cplx, 4, Eigen::Dynamic> tmp(4, cols);
    std::size_t stride = 1;
    for (std::size_t d = 0; d < digits; ++d, stride *= 4) {
        const std::size_t rows = static_cast<std::size_t>(x.rows());
        for (std::size_t base = 0; base < rows; ++base) {
            if ((base / stride) % 4 != 0) continue;
            for (int k = 0; k < 4; ++k) tmp.row(k) = x.row(static_cast<Eigen::Index>(base + k * stride));
            for (int k = 0; k < 4; ++k) {
                x.row(static_cast<Eigen::Index>(base + k * stride)) = u.row(k) * tmp;
            }
        }
    }
}

/// Lift `op` onto `target` sites (op.support must be a subset).
Matrix lift(const SiteOperator& op, const std::vector<int>& target)
{
    const std::size_t s = op.support.size();
    std::vector<std::size_t> pos(s);
    std::size_t mask = 0;
    for (std::size_t j = 0; j < s; ++j) {
        auto it = std::find(target.begin(), target.end(), op.support[j]);
        if (it == target.end()) throw DimensionError("lift: support not contained in target");
        pos[j] = static_cast<std::size_t>(it - target.begin());
        mask |= std::size_t{1} << pos[j];
    }
    auto scatter = [&](std::size_t loc) {
        std::size_t out = 0;
        for (std::size_t j = 0; j < s; ++j) out |= ((loc >> j) & 1u) << pos[j];
        return out;
    };
    auto gather = [&](std::size_t full) {
        std::size_t loc = 0;
        for (std::size_t j = 0; j < s; ++j) loc |= ((full >> pos[j]) & 1u) << j;
        return loc;
    };

    const std::size_t dim = hilbert_dim(target.size());
    const std::size_t local = hilbert_dim(s);
    std::vector<std::size_t> scattered(local);
    for (std::size_t l = 0; l < local; ++l) scattered[l] = scatter(l);

    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t a = 0; a < dim; ++a) {
        const std::size_t a_loc = gather(a);
        const std::size_t rest = a & ~mask;
        for (std::size_t b_loc = 0; b_loc < local; ++b_loc) {
            const cplx v = op.matrix(static_cast<Eigen::Index>(a_loc), static_cast<Eigen::Index>(b_loc));
            if (v != cplx(0.0)) {
                out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(rest | scattered[b_loc])) = v;
            }
        }
    }
    return out;
}

/// Accumulates X -> a X b into the matrix-unit superoperator `s`.
/// A null pointer stands for the identity.
void add_sandwich(Matrix& s, const Matrix* a, const Matrix* b, std::size_t sites)
{
    const std::size_t dim = hilbert_dim(sites);
    for (std::size_t c = 0; c < dim; ++c) {
        for (std::size_t ai = 0; ai < dim; ++ai) {
            const cplx av = a ? (*a)(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(ai))
                              : cplx(c == ai ? 1.0 : 0.0);
            if (av == cplx(0.0)) continue;
            for (std::size_t bi = 0; bi < dim; ++bi) {
                for (std::size_t d = 0; d < dim; ++d) {
                    const cplx bv = b ? (*b)(static_cast<Eigen::Index>(bi), static_cast<Eigen::Index>(d))
                                      : cplx(bi == d ? 1.0 : 0.0);
                    if (bv == cplx(0.0)) continue;
                    s(static_cast<Eigen::Index>(interleave(c, d, sites)),
                      static_cast<Eigen::Index>(interleave(ai, bi, sites))) += av * bv;
                }
            }
        }
    }
}

struct TermGroup {
    Matrix hamiltonian;
    std::vector<std::pair<double, Matrix>> jumps;
};

std::map<std::vector<int>, TermGroup> group_by_support(const Model& model)
{
    std::map<std::vector<int>, TermGroup> groups;
    auto key_of = [](const SiteOperator& op) {
        auto k = op.support;
        std::sort(k.begin(), k.end());
        return k;
    };
    for (const auto& h : model.hamiltonian) {
        if (h.coefficient == 0.0) continue;
        const auto key = key_of(h.op);
        auto& g = groups[key];
        Matrix lifted = h.coefficient * lift(h.op, key);
        if (g.hamiltonian.size() == 0) {
            g.hamiltonian = std::move(lifted);
        } else {
            g.hamiltonian += lifted;
        }
    }
    for (const auto& j : model.jumps) {
        if (j.rate == 0.0) continue;
        const auto key = key_of(j.op);
        groups[key].jumps.emplace_back(j.rate, lift(j.op, key));
    }
    return groups;
}

/// Matrix-unit superoperator of one support group.
Matrix group_superop(const TermGroup& g, std::size_t sites, bool adjoint)
{
    const std::size_t n = std::size_t{1} << (2 * sites);
    const std::size_t dim = hilbert_dim(sites);
    Matrix s = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    const cplx i_unit(0.0, 1.0);

    if (g.hamiltonian.size() != 0) {
        const double sign = adjoint ? 1.0 : -1.0;
        const Matrix left = sign * i_unit * g.hamiltonian;
        const Matrix right = -sign * i_unit * g.hamiltonian;
        add_sandwich(s, &left, nullptr, sites);
        add_sandwich(s, nullptr, &right, sites);
    }
    if (!g.jumps.empty()) {
        Matrix k = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
        for (const auto& [rate, op] : g.jumps) {
            const Matrix scaled = rate * op;
            const Matrix dag = op.adjoint();
            if (adjoint) {
                const Matrix scaled_dag = rate * dag;
                add_sandwich(s, &scaled_dag, &op, sites);
            } else {
                add_sandwich(s, &scaled, &dag, sites);
            }
            k += rate * dag * op;
        }
        const Matrix half_k = -0.5 * k;
        add_sandwich(s, &half_k, nullptr, sites);
        add_sandwich(s, nullptr, &half_k, sites);
    }
    return s;
}

SuperMatrix assemble_impl(const Model& model, const Lattice& lattice, const LocalBasis& basis, bool adjoint)
{
    validate(model, lattice);
    const int n_sites = lattice.sites;
    const std::size_t dim = operator_space_dim(n_sites);

    const Eigen::Matrix4cd w_right = frame_matrix(basis.right);
    const Eigen::Matrix4cd w_left_dag = frame_matrix(basis.left).adjoint();

    std::vector<Eigen::Triplet<cplx>> triplets;
    for (const auto& [support, group] : group_by_support(model)) {
        const std::size_t s = support.size();
        // T = W_L^+ S W_R in the local product basis
        Matrix t = group_superop(group, s, adjoint);
        Matrix tt = t.transpose();
        kron_transform_rows(tt, w_right.transpose(), s);
        t = tt.transpose();
        kron_transform_rows(t, w_left_dag, s);

        // embed: rest digits shared between row and column
        const std::size_t local = std::size_t{1} << (2 * s);
        std::vector<std::size_t> scatter(local, 0);
        for (std::size_t l = 0; l < local; ++l) {
            for (std::size_t j = 0; j < s; ++j) {
                scatter[l] += ((l >> (2 * j)) & 3u) << (2 * static_cast<std::size_t>(support[j]));
            }
        }
        std::vector<int> rest_sites;
        for (int site = 0; site < n_sites; ++site) {
            if (!std::binary_search(support.begin(), support.end(), site)) rest_sites.push_back(site);
        }
        const std::size_t rest_count = std::size_t{1} << (2 * rest_sites.size());

        std::vector<std::tuple<std::size_t, std::size_t, cplx>> local_nz;
        for (std::size_t c = 0; c < local; ++c) {
            for (std::size_t r = 0; r < local; ++r) {
                const cplx v = t(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
                if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
                    throw NumericalError("superoperator entry overflowed during assembly");
                }
                if (std::abs(v) > kDropTol) local_nz.emplace_back(scatter[r], scatter[c], v);
            }
        }
        for (std::size_t rc = 0; rc < rest_count; ++rc) {
            std::size_t base = 0;
            for (std::size_t k = 0; k < rest_sites.size(); ++k) {
                base += ((rc >> (2 * k)) & 3u) << (2 * static_cast<std::size_t>(rest_sites[k]));
            }
            for (const auto& [r, c, v] : local_nz) {
                triplets.emplace_back(static_cast<Eigen::Index>(base + r), static_cast<Eigen::Index>(base + c), v);
            }
        }
    }

    SuperMatrix out{basis, lattice, Eigen::SparseMatrix<cplx>(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim))};
    out.entries.setFromTriplets(triplets.begin(), triplets.end());
    for (Eigen::Index k = 0; k < out.entries.nonZeros(); ++k) {
        const cplx v = out.entries.valuePtr()[k];
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw NumericalError("superoperator entry overflowed during assembly");
        }
    }
    out.entries.prune(cplx(0.0), kDropTol);
    out.entries.makeCompressed();
    return out;
}

Matrix kron(const Matrix& a, const Matrix& b)
{
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

std::size_t sites_of_dim(Eigen::Index dim)
{
    std::size_t n = 0;
    while ((Eigen::Index{1} << n) < dim) ++n;
    if ((Eigen::Index{1} << n) != dim) throw DimensionError("operator dimension is not a power of two");
    return n;
}

} // namespace

SiteOperator SiteOperator::on_site(int site, const LocalOperator& op)
{
    return {{site}, op};
}

SiteOperator SiteOperator::on_pair(int i, const LocalOperator& op_i, int j, const LocalOperator& op_j)
{
    // support[0] = i is the least significant qubit: matrix = op_j (x) op_i
    return {{i, j}, kron(op_j, op_i)};
}

SiteOperator operator+(const SiteOperator& a, const SiteOperator& b)
{
    std::vector<int> support = a.support;
    for (int s : b.support) {
        if (std::find(support.begin(), support.end(), s) == support.end()) support.push_back(s);
    }
    return {support, lift(a, support) + lift(b, support)};
}

SiteOperator operator*(cplx s, const SiteOperator& a)
{
    return {a.support, s * a.matrix};
}

Model& Model::operator+=(const Model& other)
{
    if (name.empty()) {
        name = other.name;
    } else if (!other.name.empty()) {
        name += "+" + other.name;
    }
    for (const auto& [k, v] : other.parameters) parameters[k] = v;
    hamiltonian.insert(hamiltonian.end(), other.hamiltonian.begin(), other.hamiltonian.end());
    jumps.insert(jumps.end(), other.jumps.begin(), other.jumps.end());
    warnings.insert(warnings.end(), other.warnings.begin(), other.warnings.end());
    return *this;
}

Model operator+(Model a, const Model& b)
{
    a += b;
    return a;
}

Eigen::MatrixXcd SuperMatrix::dense(std::size_t limit) const
{
    if (dim() > limit) {
        throw NumericalError("dense superoperator of dimension " + std::to_string(dim()) +
                             " exceeds the dense limit " + std::to_string(limit) +
                             "; analyse diagonal blocks instead");
    }
    return Eigen::MatrixXcd(entries);
}

SuperMatrix operator+(const SuperMatrix& a, const SuperMatrix& b)
{
    if (a.dim() != b.dim() || a.basis.name != b.basis.name) {
        throw DimensionError("cannot add superoperators in different spaces");
    }
    SuperMatrix out = a;
    out.entries = a.entries + b.entries;
    return out;
}

void validate(const Model& model, const Lattice& lattice)
{
    auto check_support = [&](const SiteOperator& op, const char* what) {
        if (op.support.empty()) throw InvalidModel(std::string(what) + " has empty support");
        for (std::size_t a = 0; a < op.support.size(); ++a) {
            const int s = op.support[a];
            if (s < 0 || s >= lattice.sites) {
                throw InvalidModel(std::string(what) + " acts on site " + std::to_string(s) + " outside the lattice");
            }
            for (std::size_t b = a + 1; b < op.support.size(); ++b) {
                if (op.support[b] == s) throw InvalidModel(std::string(what) + " lists site twice");
            }
        }
        const auto d = static_cast<Eigen::Index>(hilbert_dim(op.support.size()));
        if (op.matrix.rows() != d || op.matrix.cols() != d) {
            throw InvalidModel(std::string(what) + " matrix does not match its support");
        }
        if (!op.matrix.allFinite()) throw InvalidModel(std::string(what) + " has non-finite entries");
    };

    for (const auto& h : model.hamiltonian) {
        check_support(h.op, "Hamiltonian term");
        if (!std::isfinite(h.coefficient)) throw InvalidModel("Hamiltonian coefficient is not finite");
        const double scale = std::max(1.0, h.op.matrix.cwiseAbs().maxCoeff());
        if ((h.op.matrix - h.op.matrix.adjoint()).cwiseAbs().maxCoeff() > kStructuralTol * scale) {
            throw InvalidModel("Hamiltonian term is not Hermitian");
        }
    }
    for (const auto& j : model.jumps) {
        check_support(j.op, "Lindblad term");
        if (!(j.rate >= 0.0) || !std::isfinite(j.rate)) {
            throw InvalidModel("Lindblad rate must be finite and non-negative");
        }
    }
}

SuperMatrix assemble(const Model& model, const Lattice& lattice, const LocalBasis& basis)
{
    return assemble_impl(model, lattice, basis, false);
}

SuperMatrix assemble_adjoint(const Model& model, const Lattice& lattice, const LocalBasis& basis)
{
    return assemble_impl(model, lattice, basis, true);
}

Eigen::MatrixXcd embed(const SiteOperator& op, int n_sites)
{
    std::vector<int> all(static_cast<std::size_t>(n_sites));
    std::iota(all.begin(), all.end(), 0);
    return lift(op, all);
}

Eigen::MatrixXcd hamiltonian_matrix(const Model& model, int n_sites)
{
    const auto d = static_cast<Eigen::Index>(hilbert_dim(static_cast<std::size_t>(n_sites)));
    Matrix h = Matrix::Zero(d, d);
    for (const auto& t : model.hamiltonian) h += t.coefficient * embed(t.op, n_sites);
    return h;
}

namespace {

Matrix apply_impl(const Model& model, const Lattice& lattice, const Matrix& x, bool adjoint)
{
    validate(model, lattice);
    const auto d = static_cast<Eigen::Index>(hilbert_dim(static_cast<std::size_t>(lattice.sites)));
    if (x.rows() != d || x.cols() != d) {
        throw DimensionError("apply: operator is " + std::to_string(x.rows()) + "x" + std::to_string(x.cols()) +
                             ", lattice needs " + std::to_string(d));
    }
    const cplx i_unit(0.0, 1.0);
    const Matrix h = hamiltonian_matrix(model, lattice.sites);
    Matrix out = (adjoint ? i_unit : -i_unit) * (h * x - x * h);
    for (const auto& j : model.jumps) {
        if (j.rate == 0.0) continue;
        const Matrix l = embed(j.op, lattice.sites);
        const Matrix k = l.adjoint() * l;
        const Matrix sandwich = adjoint ? Matrix(l.adjoint() * x * l) : Matrix(l * x * l.adjoint());
        out += j.rate * (sandwich - 0.5 * (k * x + x * k));
    }
    return out;
}

} // namespace

Eigen::MatrixXcd apply(const Model& model, const Lattice& lattice, const Eigen::MatrixXcd& rho)
{
    return apply_impl(model, lattice, rho, false);
}

Eigen::MatrixXcd apply_adjoint(const Model& model, const Lattice& lattice, const Eigen::MatrixXcd& b)
{
    return apply_impl(model, lattice, b, true);
}

Eigen::MatrixXcd effective_matrix(const Model& model, const Lattice& lattice,
                                  std::span<const Eigen::MatrixXcd> left_ops,
                                  std::span<const Eigen::MatrixXcd> right_ops)
{
    if (left_ops.empty() || right_ops.empty()) throw DimensionError("effective_matrix: empty operator list");
    Matrix out(static_cast<Eigen::Index>(left_ops.size()), static_cast<Eigen::Index>(right_ops.size()));
    for (std::size_t n = 0; n < right_ops.size(); ++n) {
        const Matrix image = apply(model, lattice, right_ops[n]);
        for (std::size_t m = 0; m < left_ops.size(); ++m) {
            out(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) = hs_inner(left_ops[m], image);
        }
    }
    return out;
}

Eigen::MatrixXcd product_operator(const ProductLabel& label, const Frame& frame)
{
    Matrix out = Matrix::Identity(1, 1);
    for (int site = 0; site < label.sites(); ++site) {
        out = kron(frame[label[site]], out);
    }
    return out;
}

Eigen::VectorXcd vec_units(const Eigen::MatrixXcd& x)
{
    const std::size_t s = sites_of_dim(x.rows());
    if (x.cols() != x.rows()) throw DimensionError("vec_units: operator must be square");
    Eigen::VectorXcd v(x.size());
    for (Eigen::Index a = 0; a < x.rows(); ++a) {
        for (Eigen::Index b = 0; b < x.cols(); ++b) {
            v(static_cast<Eigen::Index>(interleave(static_cast<std::size_t>(a), static_cast<std::size_t>(b), s))) = x(a, b);
        }
    }
    return v;
}

Eigen::MatrixXcd unvec_units(const Eigen::VectorXcd& v)
{
    std::size_t s = 0;
    while ((Eigen::Index{1} << (2 * s)) < v.size()) ++s;
    if ((Eigen::Index{1} << (2 * s)) != v.size()) throw DimensionError("unvec_units: length is not a power of four");
    const auto d = static_cast<Eigen::Index>(hilbert_dim(s));
    Matrix x(d, d);
    for (Eigen::Index a = 0; a < d; ++a) {
        for (Eigen::Index b = 0; b < d; ++b) {
            x(a, b) = v(static_cast<Eigen::Index>(interleave(static_cast<std::size_t>(a), static_cast<std::size_t>(b), s)));
        }
    }
    return x;
}

Eigen::VectorXcd expand(const Eigen::MatrixXcd& op, const LocalBasis& basis)
{
    const std::size_t s = sites_of_dim(op.rows());
    Matrix v = vec_units(op);
    kron_transform_rows(v, frame_matrix(basis.left).adjoint(), s);
    return v.col(0);
}

Eigen::MatrixXcd reconstruct(const Eigen::VectorXcd& coeffs, const LocalBasis& basis)
{
    std::size_t s = 0;
    while ((Eigen::Index{1} << (2 * s)) < coeffs.size()) ++s;
    Matrix v = coeffs;
    kron_transform_rows(v, frame_matrix(basis.right), s);
    return unvec_units(v.col(0));
}

Eigen::VectorXcd trace_functional(const LocalBasis& basis, int n_sites)
{
    const std::size_t dim = operator_space_dim(n_sites);
    std::array<cplx, 4> local_trace;
    for (int k = 0; k < 4; ++k) local_trace[k] = basis.right[k].trace();
    Eigen::VectorXcd t(static_cast<Eigen::Index>(dim));
    for (std::size_t n = 0; n < dim; ++n) {
        cplx v = 1.0;
        std::size_t idx = n;
        for (int site = 0; site < n_sites; ++site, idx >>= 2) v *= local_trace[idx & 3u];
        t(static_cast<Eigen::Index>(n)) = v;
    }
    return t;
}

Eigen::MatrixXcd to_matrix_units(const SuperMatrix& m, std::size_t limit)
{
    const auto s = static_cast<std::size_t>(m.lattice.sites);
    // S = W_R M W_L^+
    Matrix y = m.dense(limit);
    kron_transform_rows(y, frame_matrix(m.basis.right), s);
    Matrix yt = y.transpose();
    kron_transform_rows(yt, frame_matrix(m.basis.left).conjugate(), s);
    return yt.transpose();
}

Eigen::MatrixXcd sandwich_superop(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b)
{
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
        throw DimensionError("sandwich_superop: operands must be square and equal sized");
    }
    const std::size_t s = sites_of_dim(a.rows());
    const auto n = static_cast<Eigen::Index>(std::size_t{1} << (2 * s));
    Matrix out = Matrix::Zero(n, n);
    add_sandwich(out, &a, &b, s);
    return out;
}

} // namespace lgap
