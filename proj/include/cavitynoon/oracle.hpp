#ifndef CAVITYNOON_ORACLE_HPP
#define CAVITYNOON_ORACLE_HPP

#include <complex>
#include <vector>

#include "cavitynoon/dynamics.hpp"
#include "cavitynoon/model.hpp"
#include "cavitynoon/states.hpp"

namespace cavitynoon::oracle {

/// Localized Fock-space truncation of the exact Hamiltonian.  Basis ordering
/// is (n0, m0, n1, m1) row-major with m in {-1,+1} mapped to {0,1}.
struct FockTruncation {
    int n_max_local = 0;
    int dimension() const { return 4 * (n_max_local + 1) * (n_max_local + 1); }

    static constexpr int kStateVectorCap = 65536;
    static constexpr int kDenseDiagCap = 4096;

    void validate() const;   // throws std::length_error above the caps
};

/// Full Hamiltonian in the truncated localized basis; real symmetric by
/// construction (row-major dim x dim).
std::vector<double> build_hamiltonian(const ModelParams& p, const FockTruncation& t);

/// Max-norm of P H - H P with the parity operator
/// P = exp(i pi (n0+n1) + i pi/2 (sx0 + sx1)), computed through P's signed
/// permutation action in O(dim^2).
double parity_commutator_norm(const ModelParams& p, const FockTruncation& t);

/// Spectral (diagonalize-once) evolution of a N00N-type initial state under
/// the exact truncated Hamiltonian.
class ExactEvolution {
public:
    ExactEvolution(const InitialNoonState& state, const ModelParams& p,
                   const FockTruncation& t);

    QubitDensityMatrix reduced_density(double omega_t) const;

    double energy_expectation() const;              // time independent
    double norm_at(double omega_t) const;
    double parity_expectation(double omega_t) const;

    /// Population on the truncation edge (n0 or n1 = n_max_local) at t;
    /// results are flagged unreliable above 1e-8.
    double edge_population(double omega_t) const;
    bool reliable_at(double omega_t) const { return edge_population(omega_t) <= 1e-8; }

    const std::vector<double>& eigenvalues() const { return eigenvalues_; }

    /// Full evolved state vector in the localized basis.
    std::vector<std::complex<double>> state_at(double omega_t) const;

private:
    ModelParams params_;
    FockTruncation trunc_;
    std::vector<double> eigenvalues_;
    std::vector<double> eigenvectors_;               // columns
    std::vector<std::complex<double>> spectral_amp_; // Q^T psi0
    std::vector<int> parity_perm_;
    std::vector<double> parity_sign_;
};

/// Convenience wrapper; requires n <= n_max_local - 10 so truncation leakage
/// stays negligible (throws std::length_error otherwise).
QubitDensityMatrix exact_reduced_density(const InitialNoonState& state, const ModelParams& p,
                                         const FockTruncation& t, double omega_t);

} // namespace cavitynoon::oracle

#endif
