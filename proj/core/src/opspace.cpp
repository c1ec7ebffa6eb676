// opspace.cpp: local frames, duals and grading

#include "lgap/opspace.hpp"

#include <cmath>
#include <iostream>
#include <limits>

#include "lgap/errors.hpp"

namespace lgap {

namespace ops {

LocalOperator identity() { return LocalOperator::Identity(); }

LocalOperator sigma_x()
{
    LocalOperator m;
    m << 0, 1, 1, 0;
    return m;
}

LocalOperator sigma_y()
{
    LocalOperator m;
    m << 0, cplx(0, -1), cplx(0, 1), 0;
    return m;
}

LocalOperator sigma_z()
{
    LocalOperator m;
    m << 1, 0, 0, -1;
    return m;
}

LocalOperator sigma_plus()
{
    LocalOperator m;
    m << 0, 1, 0, 0;
    return m;
}

LocalOperator sigma_minus()
{
    LocalOperator m;
    m << 0, 0, 1, 0;
    return m;
}

LocalOperator proj_up()
{
    LocalOperator m;
    m << 1, 0, 0, 0;
    return m;
}

LocalOperator proj_down()
{
    LocalOperator m;
    m << 0, 0, 0, 1;
    return m;
}

LocalOperator proj_right() { return 0.5 * (identity() + sigma_x()); }
LocalOperator proj_left() { return 0.5 * (identity() - sigma_x()); }

LocalOperator sigma_x_plus()
{
    Eigen::Vector2cd right(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0));
    Eigen::Vector2cd left(1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0));
    return right * left.adjoint();
}

} // namespace ops

cplx hs_inner(const Eigen::MatrixXcd& b, const Eigen::MatrixXcd& a)
{
    if (b.rows() != a.rows() || b.cols() != a.cols()) {
        throw DimensionError("hs_inner: operand shapes differ");
    }
    return (b.conjugate().cwiseProduct(a)).sum();
}

Frame dual_basis(const Frame& right, double* condition)
{
    Eigen::Matrix4cd gram;
    for (int m = 0; m < 4; ++m) {
        for (int n = 0; n < 4; ++n) {
            gram(m, n) = hs_inner(right[m], right[n]);
        }
    }

    Eigen::JacobiSVD<Eigen::Matrix4cd> svd(gram);
    const auto& sv = svd.singularValues();
    const double smax = sv(0);
    const double smin = sv(3);
    if (!(smax > 0.0) || smin <= 1e-14 * smax || !std::isfinite(smax)) {
        throw BasisDegenerate("dual_basis: right frame is linearly dependent (singular Gram matrix)");
    }
    const double cond = smax / smin;
    if (condition) *condition = cond;
    if (cond > kIllConditionedGram) {
        std::clog << "lgap: warning: ill-conditioned local basis (Gram condition " << cond << ")\n";
    }

    // Tr(L_m^+ R_n) = sum_k conj(C_mk) G_kn = delta_mn  =>  C = conj(G^-1)
    const Eigen::Matrix4cd coeff = gram.inverse().conjugate();
    Frame left;
    for (int m = 0; m < 4; ++m) {
        left[m] = LocalOperator::Zero();
        for (int k = 0; k < 4; ++k) left[m] += coeff(m, k) * right[k];
    }
    return left;
}

LocalBasis make_custom_basis(std::string name, const Frame& right)
{
    LocalBasis basis;
    basis.name = std::move(name);
    basis.right = right;
    basis.left = dual_basis(right, &basis.gram_condition);
    return basis;
}

LocalBasis make_local_basis(BasisKind kind)
{
    using namespace ops;
    switch (kind) {
    case BasisKind::pauli:
        return make_custom_basis("pauli", {identity(), sigma_z(), sigma_x(), sigma_y()});
    case BasisKind::bx:
        return make_custom_basis("bx", {proj_right(), sigma_x(), sigma_z(), sigma_y()});
    case BasisKind::bx_prime:
        return make_custom_basis("bx_prime",
                                 {proj_right(), sigma_x(), std::pow(2.0, 0.25) * sigma_z(), sigma_y()});
    case BasisKind::bz:
        return make_custom_basis("bz", {proj_down(), proj_up(), sigma_plus(), sigma_minus()});
    }
    throw std::logic_error("make_local_basis: unknown kind");
}

LocalBasis basis_by_name(std::string_view name)
{
    if (name == "pauli") return make_local_basis(BasisKind::pauli);
    if (name == "bx") return make_local_basis(BasisKind::bx);
    if (name == "bx_prime") return make_local_basis(BasisKind::bx_prime);
    if (name == "bz") return make_local_basis(BasisKind::bz);
    throw std::invalid_argument("unknown basis '" + std::string(name) + "'");
}

std::vector<std::string> basis_names() { return {"pauli", "bx", "bx_prime", "bz"}; }

double biorthonormality_error(const LocalBasis& basis)
{
    double worst = 0.0;
    for (int m = 0; m < 4; ++m) {
        for (int n = 0; n < 4; ++n) {
            const cplx expected = (m == n) ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(hs_inner(basis.left[m], basis.right[n]) - expected));
        }
    }
    return worst;
}

bool check_biorthonormality(const LocalBasis& basis, double tol)
{
    return biorthonormality_error(basis) <= tol;
}

ProductLabel::ProductLabel(std::vector<std::uint8_t> letters) : letters_(std::move(letters)) {}

std::size_t operator_space_dim(int n_sites)
{
    if (n_sites < 0 || 2 * n_sites >= std::numeric_limits<std::size_t>::digits) {
        throw DimensionError("operator space for " + std::to_string(n_sites) + " sites is not addressable");
    }
    return std::size_t{1} << (2 * n_sites);
}

ProductLabel ProductLabel::decode(std::size_t index, int n_sites)
{
    if (index >= operator_space_dim(n_sites)) {
        throw DimensionError("ProductLabel::decode: index out of range");
    }
    std::vector<std::uint8_t> letters(static_cast<std::size_t>(n_sites));
    for (auto& l : letters) {
        l = static_cast<std::uint8_t>(index & 3u);
        index >>= 2;
    }
    return ProductLabel(std::move(letters));
}

std::size_t ProductLabel::encode() const
{
    std::size_t index = 0;
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) {
        index = (index << 2) | *it;
    }
    return index;
}

std::string ProductLabel::to_string(const std::array<std::string_view, 4>& symbols) const
{
    std::string out;
    for (auto l : letters_) out += symbols.at(l);
    return out;
}

std::string_view to_string(GradingRule rule)
{
    switch (rule) {
    case GradingRule::particle_xyz: return "particle_xyz";
    case GradingRule::nynz: return "nynz";
    case GradingRule::ketbra_updown: return "ketbra_updown";
    }
    return "?";
}

GradingRule grading_by_name(std::string_view name)
{
    if (name == "particle_xyz") return GradingRule::particle_xyz;
    if (name == "nynz") return GradingRule::nynz;
    if (name == "ketbra_updown") return GradingRule::ketbra_updown;
    throw std::invalid_argument("unknown grading rule '" + std::string(name) + "'");
}

GradeKey grade(const ProductLabel& label, GradingRule rule)
{
    std::array<int, 4> count{0, 0, 0, 0};
    for (auto l : label.letters()) {
        if (l > 3) throw DimensionError("grade: letter outside the four-element local frame");
        ++count[l];
    }

    GradeKey key;
    switch (rule) {
    case GradingRule::particle_xyz: {
        const int nx = count[1], nz = count[2], ny = count[3];
        key.total = nx + ny + nz;
        key.parities = {nx % 2, ny % 2, nz % 2};
        key.rank = 4 * key.parities[0] + 2 * key.parities[1] + key.parities[2];
        break;
    }
    case GradingRule::nynz:
        key.total = count[1] + count[3];
        key.aux = {count[1], count[3]};
        break;
    case GradingRule::ketbra_updown: {
        const int n_ket = count[1] + count[2];
        const int n_bra = count[1] + count[3];
        key.total = n_ket + n_bra;
        key.aux = {n_ket, n_bra};
        key.rank = n_bra;
        break;
    }
    }
    return key;
}

} // namespace lgap
