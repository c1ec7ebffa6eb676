// liouville.hpp: lattices, Lindblad models and superoperator assembly in
// product operator bases.

#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "lgap/opspace.hpp"

namespace lgap {

enum class Geometry { chain, cubic, star, custom };
enum class Boundary { open, periodic };

std::string_view to_string(Geometry g);
std::string_view to_string(Boundary b);

struct Lattice {
    int sites = 0;
    /// Undirected bonds, each listed once with i < j.
    std::vector<std::pair<int, int>> bonds;
    int dimension = 1;
    Geometry geometry = Geometry::custom;
    Boundary boundary = Boundary::open;
    /// Linear extent per dimension (cubic and chain geometries).
    std::vector<int> extent;

    static Lattice chain(int n, Boundary boundary);
    static Lattice cubic(int extent, int dimension, Boundary boundary);
    /// Site 0 is the hub, sites 1..leaves the leaves.
    static Lattice star(int leaves);
    static Lattice custom(int n, std::vector<std::pair<int, int>> bonds);

    int coordination(int site) const;
    int max_coordination() const;
    /// Integer position of a site in a chain or cubic lattice.
    std::vector<int> coordinates(int site) const;
};

/// Operator acting on `support` (distinct sites). `matrix` is 2^s x 2^s with
/// support[0] as the least significant qubit.
struct SiteOperator {
    std::vector<int> support;
    Eigen::MatrixXcd matrix;

    static SiteOperator on_site(int site, const LocalOperator& op);
    /// op_i (x) op_j
    static SiteOperator on_pair(int i, const LocalOperator& op_i, int j, const LocalOperator& op_j);
};

SiteOperator operator+(const SiteOperator& a, const SiteOperator& b);
SiteOperator operator*(cplx s, const SiteOperator& a);

struct HamiltonianTerm {
    double coefficient = 1.0;
    SiteOperator op;
};

struct LindbladTerm {
    double rate = 0.0;
    SiteOperator op;
};

/// L(rho) = -i[H,rho] + sum_k rate_k (L_k rho L_k^+ - 1/2 {L_k^+ L_k, rho})
/// with H = sum coefficient * op.
struct Model {
    std::string name;
    std::map<std::string, double> parameters;
    std::vector<HamiltonianTerm> hamiltonian;
    std::vector<LindbladTerm> jumps;
    std::vector<std::string> warnings;

    Model& operator+=(const Model& other);
};

Model operator+(Model a, const Model& b);

/// Matrix with entries (m,n) = <<B_m | L(A_n)>>, rows indexed by left
/// elements. Stored sparse; indices follow ProductLabel encoding.
struct SuperMatrix {
    LocalBasis basis;
    Lattice lattice;
    Eigen::SparseMatrix<cplx> entries;

    std::size_t dim() const { return static_cast<std::size_t>(entries.rows()); }
    Eigen::MatrixXcd dense(std::size_t limit = 4096) const;
};

SuperMatrix operator+(const SuperMatrix& a, const SuperMatrix& b);

/// Throws InvalidModel for negative rates, non-Hermitian Hamiltonian terms or
/// supports outside the lattice.
void validate(const Model& model, const Lattice& lattice);

SuperMatrix assemble(const Model& model, const Lattice& lattice, const LocalBasis& basis);

/// Heisenberg-picture generator L^+(B) = i[H,B] + sum_k rate_k (L_k^+ B L_k - 1/2 {L_k^+ L_k, B}).
SuperMatrix assemble_adjoint(const Model& model, const Lattice& lattice, const LocalBasis& basis);

/// Dense 2^N x 2^N embedding of a site operator.
Eigen::MatrixXcd embed(const SiteOperator& op, int n_sites);

/// Direct Hilbert-space evaluation of L(rho). Independent of any operator basis.
Eigen::MatrixXcd apply(const Model& model, const Lattice& lattice, const Eigen::MatrixXcd& rho);
Eigen::MatrixXcd apply_adjoint(const Model& model, const Lattice& lattice, const Eigen::MatrixXcd& b);

/// Entry (m,n) = Tr(left_ops[m]^+ L(right_ops[n])).
Eigen::MatrixXcd effective_matrix(const Model& model, const Lattice& lattice,
                                  std::span<const Eigen::MatrixXcd> left_ops,
                                  std::span<const Eigen::MatrixXcd> right_ops);

/// Full Hamiltonian as a dense 2^N matrix.
Eigen::MatrixXcd hamiltonian_matrix(const Model& model, int n_sites);

/// Product operator A = (x)_i frame[label_i] on 2^N dimensions.
Eigen::MatrixXcd product_operator(const ProductLabel& label, const Frame& frame);

/// Coefficients c_n = <<B_n | op>> of `op` in the right frame.
Eigen::VectorXcd expand(const Eigen::MatrixXcd& op, const LocalBasis& basis);
/// sum_n c_n A_n
Eigen::MatrixXcd reconstruct(const Eigen::VectorXcd& coeffs, const LocalBasis& basis);

/// Row vector t with t^T M = 0 for every trace-preserving generator:
/// t_n = Tr(A_n) = <<1 | A_n>>.
Eigen::VectorXcd trace_functional(const LocalBasis& basis, int n_sites);

/// Superoperator in the matrix-unit basis E_ab (orthonormal), indexed by
/// interleaved (row bit, column bit) pairs per site. Adjoints there are
/// conjugate transposes.
Eigen::MatrixXcd to_matrix_units(const SuperMatrix& m, std::size_t limit = 4096);
/// Matrix-unit representation of X -> a X b on n sites.
Eigen::MatrixXcd sandwich_superop(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);
/// Vectorization matching to_matrix_units.
Eigen::VectorXcd vec_units(const Eigen::MatrixXcd& x);
Eigen::MatrixXcd unvec_units(const Eigen::VectorXcd& v);

} // namespace lgap
