#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lgap/blockstruct.hpp"
#include "lgap/errors.hpp"
#include "lgap/models.hpp"
#include "lgap/spectra.hpp"
#include "support.hpp"

using namespace lgap;
using namespace lgap::testing;

namespace {

Eigen::MatrixXcd product_state(const Eigen::Matrix2cd& local, int n)
{
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
    for (int s = 0; s < n; ++s) out = kron(out, Eigen::MatrixXcd(local));
    return out;
}

SpectrumResult full_spectrum(const Model& m, const Lattice& lat, BasisKind kind = BasisKind::pauli)
{
    return summarize_spectrum(eigenvalues(assemble(m, lat, make_local_basis(kind)).dense()));
}

} // namespace

TEST(Z2Model, TermCountsFollowTheRates)
{
    const auto lat = Lattice::chain(4, Boundary::periodic);
    const auto full = z2_model({0.2, 1.0, 0.5}, lat);
    EXPECT_EQ(full.jumps.size(), 4u + 2u * 4u + 4u);
    EXPECT_TRUE(full.hamiltonian.empty());
    EXPECT_EQ(z2_model({0.2, 0.0, 0.0}, lat).jumps.size(), 4u);
    EXPECT_EQ(z2_model({0.0, 1.0, 0.0}, lat).jumps.size(), 8u);
    EXPECT_THROW(z2_model({-0.1, 1.0, 0.0}, lat), InvalidModel);
}

TEST(Z2Model, AnticommutatorOperatorMatchesFlipProducts)
{
    const Eigen::MatrixXcd q = embed(controlled_flip_anticommutator(0, 1), 2);
    const Eigen::MatrixXcd up = site_op(ops::proj_up(), 0, 2);
    const Eigen::MatrixXcd up1 = site_op(ops::proj_up(), 1, 2);
    // Q = 1/2 (1 - Z Z) + s+ s- + s- s+, built independently
    const Eigen::MatrixXcd zz = site_op(ops::sigma_z(), 0, 2) * site_op(ops::sigma_z(), 1, 2);
    const Eigen::MatrixXcd expected = 0.5 * (Eigen::MatrixXcd::Identity(4, 4) - zz) +
                                      site_op(ops::sigma_plus(), 0, 2) * site_op(ops::sigma_minus(), 1, 2) +
                                      site_op(ops::sigma_minus(), 0, 2) * site_op(ops::sigma_plus(), 1, 2);
    EXPECT_LT(max_abs(q - expected), 1e-14);
    for (int sign : {+1, -1}) {
        const Eigen::MatrixXcd l = embed(controlled_flip(sign, 0, 1), 2);
        EXPECT_LT(max_abs(l.adjoint() * l - q), 1e-14) << sign;
    }
    const Eigen::MatrixXcd lplus = up * site_op(ops::sigma_plus(), 1, 2) + site_op(ops::sigma_plus(), 0, 2) * up1;
    EXPECT_LT(max_abs(embed(controlled_flip(+1, 0, 1), 2) - lplus), 1e-14);
}

TEST(Z2Model, FlipOperatorIsSymmetricInTheBond)
{
    for (int sign : {+1, -1}) {
        const Eigen::MatrixXcd a = embed(controlled_flip(sign, 0, 2), 3);
        const Eigen::MatrixXcd b = embed(controlled_flip(sign, 2, 0), 3);
        EXPECT_LT(max_abs(a - b), 1e-15);
    }
}

TEST(Z2Model, PureSpinFlipSteadyStateAndGap)
{
    const auto lat = Lattice::chain(3, Boundary::periodic);
    const auto m = z2_model({0.8, 0.0, 0.0}, lat);
    EXPECT_LT(max_abs(apply(m, lat, product_state(ops::proj_right(), 3))), 1e-14);
    const auto s = full_spectrum(m, lat);
    ASSERT_TRUE(s.gap.has_value());
    EXPECT_NEAR(*s.gap, 0.4, 1e-12);
    EXPECT_EQ(s.steady_dim, 1);
}

TEST(Z2Model, CommutesWithGlobalSpinFlip)
{
    std::mt19937 rng(61);
    const auto lat = Lattice::chain(3, Boundary::periodic);
    const auto m = z2_model({0.3, 0.9, 0.6}, lat);
    const Eigen::MatrixXcd ux = product_state(ops::sigma_x(), 3);
    for (int trial = 0; trial < 5; ++trial) {
        const Eigen::MatrixXcd rho = random_density(rng, 8);
        EXPECT_LT(max_abs(ux * apply(m, lat, rho) * ux - apply(m, lat, ux * rho * ux)), 1e-10);
    }
}

TEST(Emission, DarkStateAndZeroMode)
{
    const auto lat = Lattice::chain(3, Boundary::open);
    const auto m = emission_model(1.0, lat);
    EXPECT_LT(max_abs(apply(m, lat, product_state(ops::proj_down(), 3))), 1e-15);
    const auto s = full_spectrum(m, lat);
    EXPECT_EQ(s.steady_dim, 1);
    EXPECT_NEAR(*s.gap, 0.5, 1e-12);
    EXPECT_THROW(emission_model(-1.0, lat), InvalidModel);
}

TEST(Emission, ZFieldCentralBlock)
{
    const auto lat = Lattice::chain(1, Boundary::open);
    const double h = 0.37;
    const auto m = emission_model(1.0, lat) + field_hamiltonian({{0.0, 0.0, h}});
    const Eigen::MatrixXcd full = assemble(m, lat, make_local_basis(BasisKind::pauli)).dense();
    const Eigen::MatrixXcd central = full.block(2, 2, 2, 2);
    const auto ev = eigenvalues(central);
    EXPECT_LT(multiset_distance(ev, {cplx(-0.5, 2 * h), cplx(-0.5, -2 * h)}), 1e-12);
    // the central block is decoupled from (1, sigma_z)
    EXPECT_LT(max_abs(full.block(0, 2, 2, 2)), 1e-15);
    EXPECT_LT(max_abs(full.block(2, 0, 2, 2)), 1e-15);
}

TEST(Emission, YFieldAtZeroReducesToDecayRates)
{
    const auto lat = Lattice::chain(1, Boundary::open);
    const auto m = emission_model(1.0, lat) + field_hamiltonian({{0.0, 0.0, 0.0}});
    const Eigen::MatrixXcd full = assemble(m, lat, make_local_basis(BasisKind::pauli)).dense();
    // pauli order (1, z, x, y): a field along y rotates sigma_z into sigma_x
    const Eigen::MatrixXcd central = full.block(1, 1, 2, 2);
    EXPECT_LT(multiset_distance(eigenvalues(central), {-0.5, -1.0}), 1e-12);
}

TEST(Emission, XXChainGapIsOneHalf)
{
    std::mt19937 rng(67);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    const auto lat = Lattice::chain(4, Boundary::open);
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(4, 4);
    for (const auto& [a, b] : lat.bonds) j(a, b) = j(b, a) = u(rng);
    std::vector<double> h{u(rng), u(rng), u(rng), u(rng)};
    for (auto axis : {Axis::x, Axis::y}) {
        const auto s = full_spectrum(emission_model(1.0, lat) + xx_model(j, h, axis), lat);
        ASSERT_TRUE(s.gap.has_value());
        EXPECT_NEAR(*s.gap, 0.5, 1e-9);
    }
}

TEST(Emission, XXAxisYIsAQuarterTurnOfAxisX)
{
    std::mt19937 rng(71);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int n = 3;
    const auto lat = Lattice::chain(n, Boundary::periodic);
    Eigen::MatrixXd j(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b <= a; ++b) j(a, b) = j(b, a) = (a == b) ? 0.0 : u(rng);
    const std::vector<double> h{u(rng), u(rng), u(rng)};
    const auto basis = make_local_basis(BasisKind::pauli);
    const Eigen::MatrixXcd sx = to_matrix_units(assemble(emission_model(1.0, lat) + xx_model(j, h, Axis::x), lat, basis));
    const Eigen::MatrixXcd sy = to_matrix_units(assemble(emission_model(1.0, lat) + xx_model(j, h, Axis::y), lat, basis));
    // U = prod exp(-i pi/4 sigma_z) rotates sigma_x into sigma_y
    Eigen::Matrix2cd r = Eigen::Matrix2cd::Zero();
    r(0, 0) = std::exp(cplx(0.0, -M_PI / 4));
    r(1, 1) = std::exp(cplx(0.0, M_PI / 4));
    EXPECT_LT(max_abs(r * ops::sigma_x() * r.adjoint() - ops::sigma_y()), 1e-15);
    const Eigen::MatrixXcd u_full = product_state(r, n);
    const Eigen::MatrixXcd g = sandwich_superop(u_full, u_full.adjoint());
    const Eigen::MatrixXcd g_inv = sandwich_superop(u_full.adjoint(), u_full);
    EXPECT_LT(max_abs(sy - g * sx * g_inv), 1e-10);
}

TEST(Emission, XXModelValidation)
{
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(3, 3);
    j(0, 1) = 1.0;
    EXPECT_THROW(xx_model(j, {}, Axis::x), InvalidModel);
    j(1, 0) = 1.0;
    EXPECT_THROW(xx_model(j, {0.1}, Axis::x), DimensionError);
    const auto m = xx_model(j, {0.1, 0.0, 0.0}, Axis::x);
    EXPECT_EQ(m.hamiltonian.size(), 2u);
    // J_ij sigma_i sigma_j summed over ordered pairs
    EXPECT_DOUBLE_EQ(m.hamiltonian[0].coefficient, 2.0);
}

TEST(Magcons, AcceptsXXZAndRejectsTransverseTerms)
{
    const auto lat4 = Lattice::chain(4, Boundary::periodic);
    EXPECT_NO_THROW(magcons_model(xxz_hamiltonian(lat4, 0.8, 0.3, 0.2), lat4));
    Eigen::MatrixXd j = bond_couplings(lat4, 1.0);
    EXPECT_THROW(magcons_model(xx_model(j, {}, Axis::x), lat4), NotMagnetizationConserving);

    const auto lat5 = Lattice::chain(5, Boundary::open);
    EXPECT_NO_THROW(magcons_model(xxz_hamiltonian(lat5, 0.8, 0.3, 0.2), lat5));
    EXPECT_THROW(magcons_model(xx_model(bond_couplings(lat5, 1.0), {}, Axis::x), lat5), NotMagnetizationConserving);
    EXPECT_THROW(magcons_model(emission_model(1.0, lat5), lat5), InvalidModel);
}

TEST(Magcons, CommutesWithTotalMagnetization)
{
    const auto lat = Lattice::chain(3, Boundary::open);
    const Eigen::MatrixXcd h = hamiltonian_matrix(xxz_hamiltonian(lat, 0.7, -0.4, 0.25), 3);
    Eigen::MatrixXcd sz = Eigen::MatrixXcd::Zero(8, 8);
    for (int i = 0; i < 3; ++i) sz += site_op(ops::sigma_z(), i, 3);
    EXPECT_LT(max_abs(h * sz - sz * h), 1e-14);
    EXPECT_LT(max_abs(h - h.adjoint()), 1e-14);
}

TEST(BondCouplings, SymmetricPerBond)
{
    const auto lat = Lattice::star(3);
    const Eigen::MatrixXd j = bond_couplings(lat, 0.5);
    EXPECT_DOUBLE_EQ(j(0, 2), 0.5);
    EXPECT_DOUBLE_EQ(j(2, 0), 0.5);
    EXPECT_DOUBLE_EQ(j(1, 2), 0.0);
}

TEST(Davies, ThermalStateIsSteady)
{
    const auto lat = Lattice::chain(1, Boundary::open);
    for (double beta : {0.0, 0.5, 1.0, 3.0}) {
        DaviesSpec spec;
        spec.hamiltonian = -1.0 * ops::sigma_z();
        spec.couplings = {ops::sigma_x()};
        spec.beta = beta;
        const auto m = davies_generator(spec);
        const Eigen::MatrixXcd rho = thermal_state(spec.hamiltonian, beta);
        EXPECT_NEAR(std::abs(rho.trace() - 1.0), 0.0, 1e-14);
        EXPECT_LT(max_abs(apply(m, lat, rho)), 1e-12) << beta;
        EXPECT_TRUE(m.hamiltonian.empty());
    }
}

TEST(Davies, SpectrumIsRealForManyBodyHamiltonian)
{
    std::mt19937 rng(73);
    const auto lat = Lattice::chain(2, Boundary::open);
    for (double beta : {0.0, 0.7}) {
        DaviesSpec spec;
        spec.hamiltonian = random_hermitian(rng, 4);
        spec.couplings = {site_op(ops::sigma_x(), 0, 2), site_op(ops::sigma_y(), 1, 2)};
        spec.beta = beta;
        const auto m = davies_generator(spec);
        const auto s = full_spectrum(m, lat);
        EXPECT_LT(s.max_imag, 1e-8) << beta;
        EXPECT_GE(s.steady_dim, 1);
        EXPECT_LT(max_abs(apply(m, lat, thermal_state(spec.hamiltonian, beta))), 1e-10);
    }
}

TEST(Davies, TransitionOperatorsConnectEnergyLevels)
{
    DaviesSpec spec;
    spec.hamiltonian = -0.5 * ops::sigma_z();
    spec.couplings = {ops::sigma_x()};
    spec.beta = 2.0;
    const auto m = davies_generator(spec);
    ASSERT_EQ(m.jumps.size(), 2u);
    // H = -h sigma_z puts |up> lowest; the decay |down> -> |up> releases omega = 2h = 1
    for (const auto& t : m.jumps) {
        const Eigen::MatrixXcd& l = t.op.matrix;
        if (std::abs(l(0, 1)) > 0.5) {
            EXPECT_NEAR(t.rate, std::exp(0.5 * 2.0 * 1.0), 1e-12);
        } else {
            EXPECT_NEAR(std::abs(l(1, 0)), 1.0, 1e-12);
            EXPECT_NEAR(t.rate, std::exp(-0.5 * 2.0 * 1.0), 1e-12);
        }
    }
}

TEST(Davies, RejectsKmsViolationsAndBadInput)
{
    DaviesSpec spec;
    spec.hamiltonian = -1.0 * ops::sigma_z();
    spec.couplings = {ops::sigma_x()};
    spec.beta = 1.0;
    spec.rate = [](double) { return 1.0; };
    EXPECT_THROW(davies_generator(spec), KmsViolation);

    spec.rate = [](double w) { return w > 0 ? 2.0 : 2.0 * std::exp(w); };  // satisfies KMS at beta = 1
    EXPECT_NO_THROW(davies_generator(spec));

    spec.rate = nullptr;
    spec.couplings = {ops::sigma_plus()};
    EXPECT_THROW(davies_generator(spec), InvalidModel);
    spec.couplings = {Eigen::MatrixXcd::Identity(4, 4)};
    EXPECT_THROW(davies_generator(spec), DimensionError);
    spec.hamiltonian = Eigen::MatrixXcd::Identity(3, 3);
    EXPECT_THROW(davies_generator(spec), DimensionError);
}

TEST(Davies, FlagsNearDegenerateBohrFrequencies)
{
    DaviesSpec spec;
    Eigen::Vector4d e(0.0, 1.0, 2.0 + 1e-7, 3.0);
    spec.hamiltonian = e.cast<cplx>().asDiagonal();
    spec.couplings = {site_op(ops::sigma_x(), 0, 2) + site_op(ops::sigma_x(), 1, 2)};
    spec.beta = 0.3;
    const auto m = davies_generator(spec);
    EXPECT_FALSE(m.warnings.empty());

    spec.hamiltonian = Eigen::Vector4d(0.0, 1.0, 2.5, 4.2).cast<cplx>().asDiagonal();
    EXPECT_TRUE(davies_generator(spec).warnings.empty());
}
