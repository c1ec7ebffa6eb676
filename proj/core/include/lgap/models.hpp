// models.hpp: built-in Lindblad models

#pragma once

#include <array>
#include <functional>
#include <vector>

#include "lgap/liouville.hpp"

namespace lgap {

struct Z2Rates {
    double gamma_x = 0.0;
    double gamma_f = 0.0;
    double gamma_z = 0.0;
};

/// gamma_x D^x + gamma_f (D^+ + D^-) + gamma_z D^z: per-site sigma^{x+} jumps,
/// per-bond controlled spin flips L^{+-}_ij and per-site sigma^z dephasing.
/// Zero rates emit no terms.
Model z2_model(const Z2Rates& rates, const Lattice& lattice);

/// L^+_ij = P^up_i s^+_j + s^+_i P^up_j (sign = +1), L^-_ij analogously (sign = -1).
SiteOperator controlled_flip(int sign, int i, int j);

/// Q_ij = 1/2 (1 - s^z_i s^z_j) + s^+_i s^-_j + s^-_i s^+_j
SiteOperator controlled_flip_anticommutator(int i, int j);

/// sigma^- on every site with rate gamma.
Model emission_model(double gamma, const Lattice& lattice);

/// H = -sum_i h_i . sigma_i, one 3-vector (h^x, h^y, h^z) per site.
Model field_hamiltonian(const std::vector<std::array<double, 3>>& fields);

enum class Axis { x, y };

/// H = sum_{i != j} J_ij s^a_i s^a_j - sum_i h_i s^a_i with a = x or y.
/// J must be symmetric; its diagonal only shifts energies and is ignored.
Model xx_model(const Eigen::MatrixXd& couplings, const std::vector<double>& fields, Axis axis);

/// Coupling matrix with `value` on every lattice bond.
Eigen::MatrixXd bond_couplings(const Lattice& lattice, double value);

/// H = sum_bonds [jxy (s^x s^x + s^y s^y) + jz s^z s^z] - hz sum_i s^z_i
Model xxz_hamiltonian(const Lattice& lattice, double jxy, double jz, double hz);

/// Accepts a Hamiltonian-only model after checking [H, sum_i s^z_i] = 0
/// (dense check for N <= 4, term-wise beyond). Throws NotMagnetizationConserving.
Model magcons_model(const Model& hamiltonian, const Lattice& lattice);

struct DaviesSpec {
    Eigen::MatrixXcd hamiltonian;
    std::vector<Eigen::MatrixXcd> couplings;
    double beta = 1.0;
    /// gamma(omega); defaults to exp(beta * omega / 2).
    std::function<double(double)> rate;
    double kms_tol = 1e-10;
};

/// Davies generator: jumps L_k(w) = sum_{E_n - E_m = w} P_m S_k P_n with rates
/// gamma(w). No Hamiltonian part, so detailed balance holds exactly.
Model davies_generator(const DaviesSpec& spec);

/// exp(-beta H) / Z
Eigen::MatrixXcd thermal_state(const Eigen::MatrixXcd& hamiltonian, double beta);

} // namespace lgap
