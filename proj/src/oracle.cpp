#include "cavitynoon/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "cavitynoon/linalg.hpp"
#include "cavitynoon/specfun.hpp"

namespace cavitynoon::oracle {

using linalg::cplx;

void FockTruncation::validate() const {
    if (n_max_local < 0)
        throw std::invalid_argument("FockTruncation: negative cutoff");
    if (dimension() > kStateVectorCap)
        throw std::length_error("FockTruncation: state vector would exceed " +
                                std::to_string(kStateVectorCap) + " entries");
}

namespace {

// basis ordering (n0, m0, n1, m1) row-major, m in {-1,+1} -> {0,1}
inline std::size_t basis_index(int n0, int s0, int n1, int s1, int levels) {
    return ((static_cast<std::size_t>(n0) * 2 + s0) * levels + n1) * 2 + s1;
}

} // namespace

std::vector<double> build_hamiltonian(const ModelParams& p, const FockTruncation& t) {
    p.validate();
    t.validate();
    const int levels = t.n_max_local + 1;
    const std::size_t dim = static_cast<std::size_t>(t.dimension());
    std::vector<double> h(dim * dim, 0.0);
    const auto at = [&](std::size_t i, std::size_t j) -> double& { return h[i * dim + j]; };

    for (int n0 = 0; n0 < levels; ++n0)
        for (int s0 = 0; s0 < 2; ++s0)
            for (int n1 = 0; n1 < levels; ++n1)
                for (int s1 = 0; s1 < 2; ++s1) {
                    const std::size_t i = basis_index(n0, s0, n1, s1, levels);
                    at(i, i) += p.omega * (n0 + n1);

                    // -delta/2 sigma_x per site
                    at(basis_index(n0, 1 - s0, n1, s1, levels), i) += -0.5 * p.delta;
                    at(basis_index(n0, s0, n1, 1 - s1, levels), i) += -0.5 * p.delta;

                    // lambda sigma_z (a + a^dagger) per site
                    const double m0 = s0 == 0 ? -1.0 : 1.0;
                    const double m1 = s1 == 0 ? -1.0 : 1.0;
                    if (n0 + 1 < levels) {
                        const double v = p.lambda * m0 * std::sqrt(n0 + 1.0);
                        at(basis_index(n0 + 1, s0, n1, s1, levels), i) += v;
                        at(i, basis_index(n0 + 1, s0, n1, s1, levels)) += v;
                    }
                    if (n1 + 1 < levels) {
                        const double v = p.lambda * m1 * std::sqrt(n1 + 1.0);
                        at(basis_index(n0, s0, n1 + 1, s1, levels), i) += v;
                        at(i, basis_index(n0, s0, n1 + 1, s1, levels)) += v;
                    }

                    // nu (a0^dagger a1 + a0 a1^dagger); the lowering partner
                    // of each pair is added when the loop reaches the other
                    // basis state
                    if (n0 + 1 < levels && n1 >= 1) {
                        const double v = p.nu * std::sqrt((n0 + 1.0) * n1);
                        at(basis_index(n0 + 1, s0, n1 - 1, s1, levels), i) += v;
                        at(i, basis_index(n0 + 1, s0, n1 - 1, s1, levels)) += v;
                    }
                }
    return h;
}

namespace {

// P = exp(i pi (n0 + n1) + i pi/2 (sx0 + sx1)) = -(-1)^(n0+n1) sx0 sx1:
// a signed permutation (flip both spins, sign from the photon parity).
void parity_action(const FockTruncation& t, std::vector<int>& perm, std::vector<double>& sign) {
    const int levels = t.n_max_local + 1;
    const std::size_t dim = static_cast<std::size_t>(t.dimension());
    perm.resize(dim);
    sign.resize(dim);
    for (int n0 = 0; n0 < levels; ++n0)
        for (int s0 = 0; s0 < 2; ++s0)
            for (int n1 = 0; n1 < levels; ++n1)
                for (int s1 = 0; s1 < 2; ++s1) {
                    const std::size_t i = basis_index(n0, s0, n1, s1, levels);
                    perm[i] = static_cast<int>(basis_index(n0, 1 - s0, n1, 1 - s1, levels));
                    sign[i] = ((n0 + n1) % 2 == 0) ? -1.0 : 1.0;
                }
}

} // namespace

double parity_commutator_norm(const ModelParams& p, const FockTruncation& t) {
    const std::vector<double> h = build_hamiltonian(p, t);
    std::vector<int> perm;
    std::vector<double> sign;
    parity_action(t, perm, sign);
    const std::size_t dim = static_cast<std::size_t>(t.dimension());
    double norm = 0.0;
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) {
            const double ph = sign[i] * h[static_cast<std::size_t>(perm[i]) * dim + j];
            const double hp = h[i * dim + perm[j]] * sign[j];
            norm = std::max(norm, std::abs(ph - hp));
        }
    return norm;
}

ExactEvolution::ExactEvolution(const InitialNoonState& state, const ModelParams& p,
                               const FockTruncation& t)
    : params_(p), trunc_(t) {
    p.validate();
    t.validate();
    if (t.dimension() > FockTruncation::kDenseDiagCap)
        throw std::length_error("ExactEvolution: dense diagonalization refused above dimension " +
                                std::to_string(FockTruncation::kDenseDiagCap));
    if (state.n > t.n_max_local)
        throw std::invalid_argument("ExactEvolution: initial photon number exceeds the cutoff");

    const std::vector<double> h = build_hamiltonian(p, t);
    linalg::symmetric_eigen(t.dimension(), h, eigenvalues_, eigenvectors_);
    parity_action(t, parity_perm_, parity_sign_);

    // psi0 = (|n,-1;0,-1> + c |0,-1;n,-1>)/sqrt(1+|c|^2); spectral
    // amplitudes follow from the two sparse rows of Q^T
    const int levels = t.n_max_local + 1;
    const std::size_t dim = static_cast<std::size_t>(t.dimension());
    const std::size_t i1 = basis_index(state.n, 0, 0, 0, levels);
    const std::size_t i2 = basis_index(0, 0, state.n, 0, levels);
    const double nf = state.norm_factor();
    spectral_amp_.resize(dim);
    for (std::size_t k = 0; k < dim; ++k)
        spectral_amp_[k] = nf * (eigenvectors_[i1 * dim + k] + state.c * eigenvectors_[i2 * dim + k]);
}

std::vector<cplx> ExactEvolution::state_at(double omega_t) const {
    const double t = omega_t / params_.omega;
    const std::size_t dim = spectral_amp_.size();
    std::vector<cplx> phased(dim);
    for (std::size_t k = 0; k < dim; ++k)
        phased[k] = spectral_amp_[k] * std::polar(1.0, -eigenvalues_[k] * t);
    std::vector<cplx> psi(dim, cplx{});
    for (std::size_t i = 0; i < dim; ++i) {
        const double* row = &eigenvectors_[i * dim];
        cplx acc{};
        for (std::size_t k = 0; k < dim; ++k) acc += row[k] * phased[k];
        psi[i] = acc;
    }
    return psi;
}

QubitDensityMatrix ExactEvolution::reduced_density(double omega_t) const {
    const std::vector<cplx> psi = state_at(omega_t);
    const int levels = trunc_.n_max_local + 1;
    QubitDensityMatrix out;
    out.omega_t = omega_t;
    for (int s0 = 0; s0 < 2; ++s0)
        for (int s1 = 0; s1 < 2; ++s1)
            for (int s0p = 0; s0p < 2; ++s0p)
                for (int s1p = 0; s1p < 2; ++s1p) {
                    cplx acc{};
                    for (int n0 = 0; n0 < levels; ++n0)
                        for (int n1 = 0; n1 < levels; ++n1)
                            acc += psi[basis_index(n0, s0, n1, s1, levels)] *
                                   std::conj(psi[basis_index(n0, s0p, n1, s1p, levels)]);
                    out.rho(2 * s0 + s1, 2 * s0p + s1p) = acc;
                }
    return out;
}

double ExactEvolution::energy_expectation() const {
    specfun::NeumaierSum e;
    for (std::size_t k = 0; k < spectral_amp_.size(); ++k)
        e.add(eigenvalues_[k] * std::norm(spectral_amp_[k]));
    return e.value();
}

double ExactEvolution::norm_at(double omega_t) const {
    const std::vector<cplx> psi = state_at(omega_t);
    specfun::NeumaierSum n;
    for (const auto& a : psi) n.add(std::norm(a));
    return std::sqrt(n.value());
}

double ExactEvolution::parity_expectation(double omega_t) const {
    const std::vector<cplx> psi = state_at(omega_t);
    cplx acc{};
    for (std::size_t i = 0; i < psi.size(); ++i)
        acc += std::conj(psi[static_cast<std::size_t>(parity_perm_[i])]) * parity_sign_[i] * psi[i];
    return acc.real();
}

double ExactEvolution::edge_population(double omega_t) const {
    const std::vector<cplx> psi = state_at(omega_t);
    const int levels = trunc_.n_max_local + 1;
    const int edge = trunc_.n_max_local;
    double pop = 0.0;
    for (int n = 0; n < levels; ++n)
        for (int s0 = 0; s0 < 2; ++s0)
            for (int s1 = 0; s1 < 2; ++s1) {
                pop += std::norm(psi[basis_index(edge, s0, n, s1, levels)]);
                if (n != edge) pop += std::norm(psi[basis_index(n, s0, edge, s1, levels)]);
            }
    return pop;
}

QubitDensityMatrix exact_reduced_density(const InitialNoonState& state, const ModelParams& p,
                                         const FockTruncation& t, double omega_t) {
    constexpr int kMargin = 10;
    if (state.n > t.n_max_local - kMargin)
        throw std::length_error("exact_reduced_density: needs n <= n_max_local - " +
                                std::to_string(kMargin) + " to keep truncation leakage negligible");
    return ExactEvolution(state, p, t).reduced_density(omega_t);
}

} // namespace cavitynoon::oracle
