// models.cpp: built-in Lindblad models and the Davies construction

#include "lgap/models.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lgap/errors.hpp"

namespace lgap {

namespace {

void require_rate(double r, const char* name)
{
    if (!(r >= 0.0) || !std::isfinite(r)) {
        throw InvalidModel(std::string("rate ") + name + " must be finite and non-negative");
    }
}

bool is_hermitian(const Eigen::MatrixXcd& m, double tol)
{
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

} // namespace

SiteOperator controlled_flip(int sign, int i, int j)
{
    const LocalOperator proj = sign > 0 ? ops::proj_up() : ops::proj_down();
    const LocalOperator flip = sign > 0 ? ops::sigma_plus() : ops::sigma_minus();
    return SiteOperator::on_pair(i, proj, j, flip) + SiteOperator::on_pair(i, flip, j, proj);
}

SiteOperator controlled_flip_anticommutator(int i, int j)
{
    using namespace ops;
    SiteOperator q = SiteOperator::on_pair(i, identity(), j, identity());
    q = cplx(0.5) * (q + cplx(-1.0) * SiteOperator::on_pair(i, sigma_z(), j, sigma_z()));
    return q + SiteOperator::on_pair(i, sigma_plus(), j, sigma_minus()) +
           SiteOperator::on_pair(i, sigma_minus(), j, sigma_plus());
}

Model z2_model(const Z2Rates& rates, const Lattice& lattice)
{
    require_rate(rates.gamma_x, "gamma_x");
    require_rate(rates.gamma_f, "gamma_f");
    require_rate(rates.gamma_z, "gamma_z");

    Model m;
    m.name = "z2";
    m.parameters = {{"gamma_x", rates.gamma_x}, {"gamma_f", rates.gamma_f}, {"gamma_z", rates.gamma_z}};
    if (rates.gamma_x > 0.0) {
        for (int i = 0; i < lattice.sites; ++i) {
            m.jumps.push_back({rates.gamma_x, SiteOperator::on_site(i, ops::sigma_x_plus())});
        }
    }
    if (rates.gamma_f > 0.0) {
        for (auto [i, j] : lattice.bonds) {
            m.jumps.push_back({rates.gamma_f, controlled_flip(+1, i, j)});
            m.jumps.push_back({rates.gamma_f, controlled_flip(-1, i, j)});
        }
    }
    if (rates.gamma_z > 0.0) {
        for (int i = 0; i < lattice.sites; ++i) {
            m.jumps.push_back({rates.gamma_z, SiteOperator::on_site(i, ops::sigma_z())});
        }
    }
    return m;
}

Model emission_model(double gamma, const Lattice& lattice)
{
    require_rate(gamma, "gamma");
    Model m;
    m.name = "emission";
    m.parameters = {{"gamma", gamma}};
    if (gamma > 0.0) {
        for (int i = 0; i < lattice.sites; ++i) {
            m.jumps.push_back({gamma, SiteOperator::on_site(i, ops::sigma_minus())});
        }
    }
    return m;
}

Model field_hamiltonian(const std::vector<std::array<double, 3>>& fields)
{
    Model m;
    m.name = "field";
    for (std::size_t i = 0; i < fields.size(); ++i) {
        const auto& h = fields[i];
        const LocalOperator op = -(h[0] * ops::sigma_x() + h[1] * ops::sigma_y() + h[2] * ops::sigma_z());
        if (op.isZero(0.0)) continue;
        m.hamiltonian.push_back({1.0, SiteOperator::on_site(static_cast<int>(i), op)});
    }
    return m;
}

Model xx_model(const Eigen::MatrixXd& couplings, const std::vector<double>& fields, Axis axis)
{
    if (couplings.rows() != couplings.cols()) throw DimensionError("coupling matrix must be square");
    if ((couplings - couplings.transpose()).cwiseAbs().maxCoeff() > kStructuralTol) {
        throw InvalidModel("coupling matrix J must be symmetric");
    }
    if (!fields.empty() && static_cast<Eigen::Index>(fields.size()) != couplings.rows()) {
        throw DimensionError("one field per site expected");
    }
    const LocalOperator s = axis == Axis::x ? ops::sigma_x() : ops::sigma_y();
    Model m;
    m.name = axis == Axis::x ? "xx" : "yy";
    const auto n = static_cast<int>(couplings.rows());
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double jij = couplings(i, j) + couplings(j, i);
            if (jij == 0.0) continue;
            m.hamiltonian.push_back({jij, SiteOperator::on_pair(i, s, j, s)});
        }
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (fields[i] == 0.0) continue;
        m.hamiltonian.push_back({-fields[i], SiteOperator::on_site(static_cast<int>(i), s)});
    }
    return m;
}

Eigen::MatrixXd bond_couplings(const Lattice& lattice, double value)
{
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(lattice.sites, lattice.sites);
    for (auto [a, b] : lattice.bonds) {
        j(a, b) = value;
        j(b, a) = value;
    }
    return j;
}

Model xxz_hamiltonian(const Lattice& lattice, double jxy, double jz, double hz)
{
    using namespace ops;
    Model m;
    m.name = "xxz";
    m.parameters = {{"jxy", jxy}, {"jz", jz}, {"hz", hz}};
    for (auto [i, j] : lattice.bonds) {
        SiteOperator bond = cplx(jxy) * (SiteOperator::on_pair(i, sigma_x(), j, sigma_x()) +
                                         SiteOperator::on_pair(i, sigma_y(), j, sigma_y()));
        bond = bond + cplx(jz) * SiteOperator::on_pair(i, sigma_z(), j, sigma_z());
        m.hamiltonian.push_back({1.0, bond});
    }
    if (hz != 0.0) {
        for (int i = 0; i < lattice.sites; ++i) {
            m.hamiltonian.push_back({-hz, SiteOperator::on_site(i, sigma_z())});
        }
    }
    return m;
}

Model magcons_model(const Model& hamiltonian, const Lattice& lattice)
{
    if (!hamiltonian.jumps.empty()) throw InvalidModel("magcons_model expects Hamiltonian terms only");
    validate(hamiltonian, lattice);

    auto total_sz = [](const std::vector<int>& support, int n) {
        SiteOperator acc{{support[0]}, Eigen::MatrixXcd(ops::sigma_z())};
        for (std::size_t k = 1; k < support.size(); ++k) {
            acc = acc + SiteOperator::on_site(support[k], ops::sigma_z());
        }
        return embed(acc, n);
    };

    if (lattice.sites <= 4) {
        std::vector<int> all(static_cast<std::size_t>(lattice.sites));
        for (int i = 0; i < lattice.sites; ++i) all[static_cast<std::size_t>(i)] = i;
        const Eigen::MatrixXcd h = hamiltonian_matrix(hamiltonian, lattice.sites);
        const Eigen::MatrixXcd sz = total_sz(all, lattice.sites);
        const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
        if ((h * sz - sz * h).cwiseAbs().maxCoeff() > kStructuralTol * scale) {
            throw NotMagnetizationConserving("Hamiltonian does not commute with the total sigma^z");
        }
    } else {
        for (const auto& t : hamiltonian.hamiltonian) {
            const auto s = static_cast<int>(t.op.support.size());
            std::vector<int> local(t.op.support.size());
            for (int k = 0; k < s; ++k) local[static_cast<std::size_t>(k)] = k;
            const Eigen::MatrixXcd sz = total_sz(local, s);
            const double scale = std::max(1.0, t.op.matrix.cwiseAbs().maxCoeff());
            if ((t.op.matrix * sz - sz * t.op.matrix).cwiseAbs().maxCoeff() > kStructuralTol * scale) {
                throw NotMagnetizationConserving("Hamiltonian term does not commute with the local sigma^z sum");
            }
        }
    }
    Model out = hamiltonian;
    out.name = "magcons:" + hamiltonian.name;
    return out;
}

Eigen::MatrixXcd thermal_state(const Eigen::MatrixXcd& hamiltonian, double beta)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hamiltonian);
    const Eigen::VectorXd e = es.eigenvalues();
    const double e0 = e.minCoeff();
    Eigen::VectorXd w = (-beta * (e.array() - e0)).exp();
    w /= w.sum();
    return es.eigenvectors() * w.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

Model davies_generator(const DaviesSpec& spec)
{
    const Eigen::MatrixXcd& h = spec.hamiltonian;
    const Eigen::Index dim = h.rows();
    if (dim != h.cols() || dim < 2 || (dim & (dim - 1)) != 0 || dim > 64) {
        throw DimensionError("Davies Hamiltonian must be square with dimension 2^N, N <= 6");
    }
    if (!is_hermitian(h, kStructuralTol)) throw InvalidModel("Davies Hamiltonian is not Hermitian");
    if (!(spec.beta >= 0.0) || !std::isfinite(spec.beta)) throw InvalidModel("beta must be finite and >= 0");
    for (const auto& s : spec.couplings) {
        if (s.rows() != dim || s.cols() != dim) throw DimensionError("coupling operator dimension mismatch");
        if (!is_hermitian(s, kStructuralTol)) throw InvalidModel("coupling operators must be Hermitian");
    }
    int n_sites = 0;
    while ((Eigen::Index{1} << n_sites) < dim) ++n_sites;

    const double beta = spec.beta;
    const auto rate = spec.rate ? spec.rate : [beta](double w) { return std::exp(0.5 * beta * w); };

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    const Eigen::VectorXd e = es.eigenvalues();
    const Eigen::MatrixXcd& v = es.eigenvectors();
    const double norm = std::max(e.cwiseAbs().maxCoeff(), 1e-300);
    const double tol = 1e-9 * norm;

    // energy levels (eigenvalues are sorted ascending)
    std::vector<double> level_energy;
    std::vector<Eigen::MatrixXcd> projector;
    for (Eigen::Index k = 0; k < dim; ++k) {
        const Eigen::MatrixXcd p = v.col(k) * v.col(k).adjoint();
        if (!level_energy.empty() && e(k) - level_energy.back() <= tol) {
            projector.back() += p;
        } else {
            level_energy.push_back(e(k));
            projector.push_back(p);
        }
    }

    // Bohr frequencies w = E_n - E_m for transitions n -> m
    struct Transition {
        double omega;
        std::size_t from, to;
    };
    std::vector<Transition> transitions;
    for (std::size_t n = 0; n < level_energy.size(); ++n) {
        for (std::size_t m = 0; m < level_energy.size(); ++m) {
            transitions.push_back({level_energy[n] - level_energy[m], n, m});
        }
    }
    std::sort(transitions.begin(), transitions.end(),
              [](const Transition& a, const Transition& b) { return a.omega < b.omega; });
    std::vector<std::vector<Transition>> groups;
    for (const auto& t : transitions) {
        if (!groups.empty() && t.omega - groups.back().front().omega <= tol) {
            groups.back().push_back(t);
        } else {
            groups.push_back({t});
        }
    }

    Model model;
    model.name = "davies";
    model.parameters = {{"beta", beta}};
    for (std::size_t g = 0; g + 1 < groups.size(); ++g) {
        const double gap = groups[g + 1].front().omega - groups[g].back().omega;
        if (gap <= 1e3 * tol) {
            std::ostringstream msg;
            msg << "near-degenerate Bohr frequencies " << groups[g].back().omega << " and "
                << groups[g + 1].front().omega;
            model.warnings.push_back(msg.str());
        }
    }

    std::vector<int> all_sites(static_cast<std::size_t>(n_sites));
    for (int i = 0; i < n_sites; ++i) all_sites[static_cast<std::size_t>(i)] = i;

    for (const auto& group : groups) {
        double omega = 0.0;
        for (const auto& t : group) omega += t.omega;
        omega /= static_cast<double>(group.size());

        const double g_plus = rate(omega);
        const double g_minus = rate(-omega);
        if (!(g_plus >= 0.0) || !std::isfinite(g_plus)) throw InvalidModel("Davies rate must be finite and >= 0");
        const double kms = std::abs(g_minus - std::exp(-beta * omega) * g_plus);
        if (kms > spec.kms_tol * std::max({1.0, g_plus, g_minus})) {
            std::ostringstream msg;
            msg << "rate profile violates the KMS condition at omega = " << omega;
            throw KmsViolation(msg.str());
        }

        for (const auto& s : spec.couplings) {
            Eigen::MatrixXcd l = Eigen::MatrixXcd::Zero(dim, dim);
            for (const auto& t : group) l += projector[t.to] * s * projector[t.from];
            if (l.cwiseAbs().maxCoeff() <= 1e-12 || g_plus == 0.0) continue;
            model.jumps.push_back({g_plus, SiteOperator{all_sites, l}});
        }
    }
    return model;
}

} // namespace lgap
