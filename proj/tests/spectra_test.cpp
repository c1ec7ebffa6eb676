#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lgap/blockstruct.hpp"
#include "lgap/errors.hpp"
#include "lgap/models.hpp"
#include "lgap/spectra.hpp"
#include "reference_data.hpp"
#include "support.hpp"

using namespace lgap;
using namespace lgap::testing;

namespace {

Eigen::MatrixXcd single_site(const std::array<double, 3>& h)
{
    const auto lat = Lattice::chain(1, Boundary::open);
    const auto m = emission_model(1.0, lat) + field_hamiltonian({h});
    return assemble(m, lat, make_local_basis(BasisKind::pauli)).dense();
}

// pauli order (1, z, x, y): a y field mixes z and x
Eigen::MatrixXcd y_field_block(double h) { return single_site({0.0, h, 0.0}).block(1, 1, 2, 2); }
Eigen::MatrixXcd z_field_block(double h) { return single_site({0.0, 0.0, h}).block(2, 2, 2, 2); }

Eigen::MatrixXcd root_of(const Eigen::MatrixXcd& rho)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
    return es.eigenvectors() * es.eigenvalues().cwiseSqrt().cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

} // namespace

TEST(Eigenvalues, DiagonalSortedDescending)
{
    Eigen::Matrix4cd d = Eigen::Matrix4cd::Zero();
    d.diagonal() << 0.0, -1.0, -0.5, -0.5;
    const auto ev = eigenvalues(d);
    ASSERT_EQ(ev.size(), 4u);
    EXPECT_EQ(ev[0], cplx(0.0));
    EXPECT_EQ(ev[1], cplx(-0.5));
    EXPECT_EQ(ev[2], cplx(-0.5));
    EXPECT_EQ(ev[3], cplx(-1.0));
}

TEST(Eigenvalues, TiesOrderedByImaginaryMagnitude)
{
    std::vector<cplx> v{cplx(-1, 2), cplx(-1, -0.5), cplx(0, 0), cplx(-1, 0.5), cplx(-1, 0)};
    sort_spectrum(v);
    EXPECT_EQ(v, (std::vector<cplx>{cplx(0, 0), cplx(-1, 0), cplx(-1, -0.5), cplx(-1, 0.5), cplx(-1, 2)}));
}

TEST(Eigenvalues, YFieldExceptionalPoint)
{
    const auto ev = eigenvalues(y_field_block(0.125));
    // defective double eigenvalue; the 2x2 closed form resolves it exactly
    for (const auto& l : ev) EXPECT_LT(std::abs(l - cplx(-0.75, 0.0)), 1e-15);
    // the Schur path on the same block embedded in a 3x3 only reaches ~sqrt(eps)
    Eigen::Matrix3cd padded = Eigen::Matrix3cd::Zero();
    padded.topLeftCorner(2, 2) = y_field_block(0.125);
    padded(2, 2) = -2.0;
    for (std::size_t k = 0; k < 2; ++k) EXPECT_LT(std::abs(eigenvalues(padded)[k] - cplx(-0.75, 0.0)), 1e-7);
}

TEST(Eigenvalues, GenericFieldBlockInsideHermitianBracket)
{
    std::mt19937 rng(97);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::MatrixXcd block = single_site({g(rng), g(rng), g(rng)}).block(1, 1, 3, 3);
        for (const auto& l : eigenvalues(block)) {
            EXPECT_LE(l.real(), -0.5 + 1e-12);
            EXPECT_GE(l.real(), -1.0 - 1e-12);
        }
    }
}

TEST(Eigenvalues, DenseLimitRequestsBlocks)
{
    EXPECT_THROW(eigenvalues(Eigen::MatrixXcd::Identity(10, 10), 8), NumericalError);
    EXPECT_THROW(eigenvalues(Eigen::MatrixXcd::Zero(2, 3)), DimensionError);
    EXPECT_TRUE(eigenvalues(Eigen::MatrixXcd(0, 0)).empty());
}

TEST(Eigenvalues, HermitianBlocksUseTheSymmetricPath)
{
    std::mt19937 rng(101);
    const Eigen::MatrixXcd h = random_hermitian(rng, 6);
    const auto sym = block_eigenvalues(h);
    for (const auto& l : sym) EXPECT_EQ(l.imag(), 0.0);
    EXPECT_LT(multiset_distance(sym, eigenvalues(h)), 1e-12);
}

TEST(SpectralGap, Z2ChainGapIsHalfSpinFlipRate)
{
    const auto lat = Lattice::chain(4, Boundary::periodic);
    const auto m = assemble(z2_model({0.4, 1.0, 0.7}, lat), lat, make_local_basis(BasisKind::bx_prime));
    const auto s = summarize_spectrum(eigenvalues(m.dense()));
    ASSERT_TRUE(s.gap.has_value());
    EXPECT_NEAR(*s.gap, 0.2, 1e-9);
    EXPECT_EQ(s.steady_dim, 1);
    EXPECT_LT(s.max_imag, 1e-8);
}

TEST(SpectralGap, MagconsEmissionGapIsOneHalf)
{
    const auto lat = Lattice::chain(3, Boundary::periodic);
    const auto model = emission_model(1.0, lat) + magcons_model(xxz_hamiltonian(lat, 0.8, -0.6, 0.3), lat);
    const auto s = summarize_spectrum(eigenvalues(assemble(model, lat, make_local_basis(BasisKind::bz)).dense()));
    EXPECT_NEAR(*s.gap, 0.5, 1e-9);
}

TEST(SpectralGap, FerromagneticLimitHasTwoSteadyStates)
{
    const auto lat = Lattice::chain(3, Boundary::periodic);
    const auto m = assemble(z2_model({0.0, 1.0, 0.5}, lat), lat, make_local_basis(BasisKind::bx_prime));
    const auto s = summarize_spectrum(eigenvalues(m.dense()));
    EXPECT_EQ(s.steady_dim, 2);
}

TEST(SpectralGap, UndefinedWithoutDecayingModes)
{
    const std::vector<cplx> zeros{0.0, cplx(1e-12, 0.0)};
    const auto g = spectral_gap(zeros);
    EXPECT_FALSE(g.gap.has_value());
    EXPECT_EQ(g.steady_dim, 2);
    // purely oscillating modes count neither as steady nor as decaying
    const std::vector<cplx> osc{0.0, cplx(0.0, 1.0), cplx(-0.3, 0.0)};
    const auto go = spectral_gap(osc);
    EXPECT_EQ(go.steady_dim, 1);
    EXPECT_NEAR(*go.gap, 0.3, 1e-15);
}

TEST(HermitianComponent, YFieldBlockBracket)
{
    const auto r = hermitian_component_bounds(y_field_block(0.3));
    EXPECT_NEAR(*r.mu_min, -1.0, 1e-12);
    EXPECT_NEAR(*r.mu_max, -0.5, 1e-12);
    EXPECT_EQ(r.method, BoundMethod::hermitian_component);
    EXPECT_DOUBLE_EQ(r.upper, *r.mu_max);
}

TEST(HermitianComponent, XXSingleExcitationBlock)
{
    // periodic 3-chain: coordination 2, every other site is a neighbor
    std::mt19937 rng(103);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const auto lat = Lattice::chain(3, Boundary::periodic);
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(3, 3);
    for (const auto& [a, b] : lat.bonds) j(a, b) = j(b, a) = u(rng);
    const auto model = emission_model(1.0, lat) + xx_model(j, {u(rng), u(rng), u(rng)}, Axis::x);
    const auto basis = make_local_basis(BasisKind::pauli);
    const auto m = assemble(model, lat, basis);
    const auto p = grade_ordering(basis, lat, GradingRule::nynz, false);
    ASSERT_TRUE(verify_block_triangular(m, p).is_triangular);
    const auto b = find_block(p, [](const GradeKey& k) { return k.total == 1; });
    ASSERT_TRUE(b.has_value());
    const Eigen::MatrixXcd block = extract_block(m, p, *b);
    const auto r = hermitian_component_bounds(block);
    const int zeta = lat.max_coordination();
    EXPECT_NEAR(*r.mu_max, -0.5, 1e-12);
    EXPECT_NEAR(*r.mu_min, -1.0 - zeta / 2.0, 1e-12);
    // Hermitian component is diagonal here
    const Eigen::MatrixXcd herm = 0.5 * (block + block.adjoint());
    EXPECT_LT(max_abs(herm - Eigen::MatrixXcd(herm.diagonal().asDiagonal())), 1e-12);
}

TEST(HermitianComponent, ExactForHermitianBlocks)
{
    std::mt19937 rng(107);
    const Eigen::MatrixXcd h = random_hermitian(rng, 7);
    const auto ev = block_eigenvalues(h);
    const auto r = hermitian_component_bounds(h);
    EXPECT_NEAR(*r.mu_max, ev.front().real(), 1e-12);
    EXPECT_NEAR(*r.mu_min, ev.back().real(), 1e-12);
}

TEST(Gershgorin, DiagonalBlockIsTight)
{
    Eigen::Matrix3cd d = Eigen::Matrix3cd::Zero();
    d.diagonal() << -0.5, -2.0, cplx(-1.0, 3.0);
    for (auto mode : {GershgorinMode::rows, GershgorinMode::cols}) {
        const auto r = gershgorin_bound(d, mode);
        for (double radius : r.disk_radii) EXPECT_EQ(radius, 0.0);
        EXPECT_DOUBLE_EQ(r.upper, -0.5);
        EXPECT_DOUBLE_EQ(*r.lower, -2.0);
    }
}

TEST(Gershgorin, ZFieldDisks)
{
    const double h = 0.3;
    const auto r = gershgorin_bound(z_field_block(h), GershgorinMode::rows);
    ASSERT_EQ(r.disk_centers.size(), 2u);
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_NEAR(std::abs(r.disk_centers[i] - cplx(-0.5)), 0.0, 1e-14);
        EXPECT_NEAR(r.disk_radii[i], 2 * h, 1e-14);
    }
    EXPECT_NEAR(r.upper, -0.5 + 2 * h, 1e-14);
}

TEST(Gershgorin, EmissionRowsTouchZero)
{
    const auto rows = gershgorin_bound(Eigen::MatrixXcd(emission_site_table().cast<cplx>()), GershgorinMode::rows);
    EXPECT_EQ(rows.method, BoundMethod::gershgorin_rows);
    EXPECT_NEAR(rows.upper, 0.0, 1e-15);
    const auto cols = gershgorin_bound(Eigen::MatrixXcd(emission_site_table().cast<cplx>()), GershgorinMode::cols);
    EXPECT_EQ(cols.method, BoundMethod::gershgorin_cols);
    EXPECT_NEAR(cols.upper, 1.0, 1e-15);  // column 0 carries the -1 below the diagonal
}

TEST(SingularValue, HermitianNegativeDefinite)
{
    Eigen::Matrix3cd d = Eigen::Matrix3cd::Zero();
    d.diagonal() << -0.7, -1.5, -3.0;
    const auto r = smallest_singular_value(d);
    EXPECT_NEAR(*r.nu, 0.7, 1e-14);
    EXPECT_NEAR(r.upper, -0.7, 1e-14);
    EXPECT_TRUE(r.caveat);
}

TEST(SingularValue, ZFieldShowsTheCaveat)
{
    const double h = 0.4;
    const auto r = smallest_singular_value(z_field_block(h));
    EXPECT_NEAR(*r.nu, std::sqrt(0.25 + 4 * h * h), 1e-12);
    EXPECT_GT(*r.nu, 0.5);
    for (const auto& l : eigenvalues(z_field_block(h))) EXPECT_NEAR(l.real(), -0.5, 1e-12);
    EXPECT_TRUE(r.caveat);
}

TEST(SingularValue, YFieldAtZero)
{
    EXPECT_NEAR(*smallest_singular_value(y_field_block(0.0)).nu, 0.5, 1e-14);
}

TEST(Weyl, Z2SpinFlipVersusRest)
{
    const Z2Rates r{0.45, 0.9, 0.6};
    const auto lat = Lattice::chain(3, Boundary::periodic);
    const auto basis = make_local_basis(BasisKind::bx_prime);
    const auto l1 = assemble(z2_model({r.gamma_x, 0.0, 0.0}, lat), lat, basis);
    const auto l2 = assemble(z2_model({0.0, r.gamma_f, r.gamma_z}, lat), lat, basis);
    const auto p = grade_ordering(basis, lat, GradingRule::particle_xyz, false);
    const auto w = weyl_check(l1, l2, p);
    EXPECT_TRUE(w.holds);
    EXPECT_GE(w.worst_margin, -1e-9);
    ASSERT_EQ(w.spectrum_sum.size(), 64u);
    EXPECT_NEAR(w.spectrum_sum[0], 0.0, 1e-10);
    // gap of the sum is at least gamma_x / 2
    double top_nonzero = -1e300;
    for (double l : w.spectrum_sum)
        if (l < -1e-9) top_nonzero = std::max(top_nonzero, l);
    EXPECT_GE(-top_nonzero, r.gamma_x / 2 - 1e-9);
}

TEST(Weyl, ZeroSecondTermGivesEqualities)
{
    const auto lat = Lattice::chain(2, Boundary::periodic);
    const auto basis = make_local_basis(BasisKind::bx_prime);
    const auto l1 = assemble(z2_model({0.6, 0.8, 0.3}, lat), lat, basis);
    SuperMatrix zero = l1;
    zero.entries.setZero();
    const auto p = grade_ordering(basis, lat, GradingRule::particle_xyz, false);
    const auto w = weyl_check(l1, zero, p);
    EXPECT_TRUE(w.holds);
    EXPECT_NEAR(w.worst_margin, 0.0, 1e-12);
    for (std::size_t k = 0; k < w.spectrum_sum.size(); ++k) EXPECT_NEAR(w.spectrum_sum[k], w.spectrum_1[k], 1e-12);
}

TEST(Weyl, RandomDiagonalOperandsAgainstSortAndCompare)
{
    std::mt19937 rng(109);
    std::uniform_real_distribution<double> u(-2.0, 0.0);
    const auto lat = Lattice::chain(1, Boundary::open);
    const auto basis = make_local_basis(BasisKind::pauli);
    const auto p = grade_ordering(basis, lat, GradingRule::particle_xyz, false);
    for (int trial = 0; trial < 20; ++trial) {
        SuperMatrix a{basis, lat, Eigen::SparseMatrix<cplx>(4, 4)};
        SuperMatrix b = a;
        std::vector<double> da(4), db(4);
        for (int k = 0; k < 4; ++k) {
            da[k] = u(rng);
            db[k] = u(rng);
            a.entries.insert(k, k) = da[k];
            b.entries.insert(k, k) = db[k];
        }
        const auto w = weyl_check(a, b, p);
        // brute force: sort the sums and compare entrywise
        std::vector<double> s(4), sa = da, sb = db;
        for (int k = 0; k < 4; ++k) s[k] = da[k] + db[k];
        std::sort(s.rbegin(), s.rend());
        std::sort(sa.rbegin(), sa.rend());
        std::sort(sb.rbegin(), sb.rend());
        bool brute = true;
        for (int k = 0; k < 4; ++k) {
            brute &= s[k] <= sa[k] + 1e-12 && s[k] <= sb[k] + 1e-12 && s[k] >= sa[k] + sb.back() - 1e-12;
        }
        EXPECT_EQ(w.holds, brute) << trial;
    }
}

TEST(Weyl, RejectsNonHermitianBlocks)
{
    const auto lat = Lattice::chain(1, Boundary::open);
    const auto basis = make_local_basis(BasisKind::pauli);
    const auto l1 = assemble(emission_model(1.0, lat), lat, basis);
    const auto l2 = assemble(field_hamiltonian({{0.0, 0.0, 0.3}}), lat, basis);
    const auto p = grade_ordering(basis, lat, GradingRule::particle_xyz, false);
    EXPECT_THROW(weyl_check(l1, l2, p), StructureError);
}

TEST(DetailedBalance, DaviesQubitHoldsAndSwappedOrderDoesNot)
{
    const auto lat = Lattice::chain(1, Boundary::open);
    DaviesSpec spec;
    spec.hamiltonian = -1.0 * ops::sigma_z();
    spec.couplings = {ops::sigma_x()};
    spec.beta = 1.0;
    const auto m = assemble(davies_generator(spec), lat, make_local_basis(BasisKind::pauli));
    const Eigen::MatrixXcd rho = thermal_state(spec.hamiltonian, 1.0);
    const auto r = detailed_balance_check(m, rho);
    EXPECT_TRUE(r.holds);
    EXPECT_LE(r.residual, 1e-10);

    // G L = L^+ G read with L as the Schroedinger generator fails at beta > 0
    const Eigen::MatrixXcd s = to_matrix_units(m);
    const Eigen::MatrixXcd g = sandwich_superop(root_of(rho), root_of(rho));
    EXPECT_GT(max_abs(g * s - s.adjoint() * g), 1e-3);
}

TEST(DetailedBalance, RankDeficientReferenceIsRejected)
{
    const auto lat = Lattice::chain(1, Boundary::open);
    const auto m = assemble(z2_model({1.0, 0.0, 0.0}, lat), lat, make_local_basis(BasisKind::bx));
    EXPECT_THROW(detailed_balance_check(m, ops::proj_right()), StructureError);
    EXPECT_THROW(detailed_balance_check(m, Eigen::MatrixXcd::Identity(4, 4)), DimensionError);
}

TEST(DetailedBalance, GenericModelFailsWithMaximallyMixedReference)
{
    const auto lat = Lattice::chain(2, Boundary::periodic);
    const auto m = assemble(z2_model({0.3, 1.0, 0.2}, lat), lat, make_local_basis(BasisKind::bx_prime));
    const auto r = detailed_balance_check(m, Eigen::MatrixXcd::Identity(4, 4) / 4.0);
    EXPECT_FALSE(r.holds);
    EXPECT_GT(r.residual, 1e-3);
}

TEST(ClosedForms, Dispersions)
{
    const std::vector<double> k0{0.0};
    EXPECT_DOUBLE_EQ(dispersion_z(k0, 0.3, 1.7), -0.15);
    EXPECT_DOUBLE_EQ(dispersion_y(k0, 0.3, 1.7, 0.4), -0.15 - 4 * 1.7 - 0.8);
    const std::vector<double> k2{M_PI, M_PI / 2};
    EXPECT_NEAR(dispersion_z(k2, 0.3, 1.0), -0.15 - 2.0 * (2.0 + 1.0), 1e-14);
    EXPECT_NEAR(dispersion_y(k2, 0.3, 1.0, 0.0), -0.15 - 2.0 * (0.0 + 1.0), 1e-14);
}

TEST(ClosedForms, SingleSiteFieldEigenvalues)
{
    const auto [a, b] = single_site_field_eigs(0.0);
    EXPECT_NEAR(std::abs(a - cplx(-0.5)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(b - cplx(-1.0)), 0.0, 1e-15);
    const auto [c, d] = single_site_field_eigs(0.25);
    EXPECT_NEAR(c.real(), -0.75, 1e-15);
    EXPECT_NEAR(std::abs(c.imag()), std::sqrt(0.25 - 0.0625), 1e-15);
    EXPECT_NEAR(std::abs(c - std::conj(d)), 0.0, 1e-15);
}
