#ifndef CAVITYNOON_STATES_HPP
#define CAVITYNOON_STATES_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "cavitynoon/model.hpp"

namespace cavitynoon {

/// Requested accuracy would need a per-mode truncation above the hard cap;
/// the parameter regime is outside the design envelope.
class TruncationCapError : public std::runtime_error {
public:
    explicit TruncationCapError(const std::string& what) : std::runtime_error(what) {}
};

/// N00N-type initial state (|n,0> + c|0,n>)/sqrt(1+|c|^2) with both qubits
/// in m = -1.  At n = 0 the two components coincide and the usual prefactor
/// no longer normalizes; the state degenerates to (1+c)|0,0>/|1+c|.
struct InitialNoonState {
    int n = 0;
    std::complex<double> c{0.0, 0.0};

    double norm_factor() const {
        if (n == 0) return 1.0 / std::abs(1.0 + c);
        return 1.0 / std::sqrt(1.0 + std::norm(c));
    }
    /// Throws std::invalid_argument for n < 0 or the null n = 0, c = -1 state.
    void validate() const {
        if (n < 0) throw std::invalid_argument("InitialNoonState: negative photon number");
        if (n == 0 && std::abs(1.0 + c) < 1e-12)
            throw std::invalid_argument("InitialNoonState: n = 0 with c = -1 is the null state");
    }
};

namespace states {

constexpr int kTruncationCap = 256;

/// Prefactor C_j: exp(-lambda^2/Omega_j^2) (sign*lambda/Omega_j)^(n0+n1+N0+N1)
/// / (2^((N0+N1)/2) sqrt(n0! n1! N0! N1!)), evaluated in log space.
double coeff_C(int mode, int n0, int n1, BlockIndex block, int sign,
               const ModelParams& p);

/// Double-sum weight F_j over binomials and two terminating 2F0 factors;
/// sign (-1)^l and argument -Omega0^2/lambda^2 for mode 0, sign (-1)^k and
/// -Omega1^2/lambda^2 for mode 1.  Rejects lambda = 0 (the divergence is
/// only removable in the C*F product).
double weight_F(int mode, int n0, int n1, BlockIndex block, const ModelParams& p);

/// C_j(lambda) * F_j with the lambda = 0 limit handled exactly: the product
/// degenerates to the 50:50 mode-mixing overlap <N0,N1|n0,n1> between
/// delocalized and localized number states (times the sign carried by the
/// projection formulas).
double cf_product(int mode, int n0, int n1, BlockIndex block, const ModelParams& p);

/// Exact overlap of the undisplaced delocalized number state <N0,N1| with
/// the localized number state |n0,n1> (symmetric/antisymmetric mode mixing).
double mode_mixing_overlap(int cap_n0, int cap_n1, int n0, int n1);

/// Expansion coefficients (c0, c1, c+, c-) of the localized number state
/// |n0,m0;n1,m1> over the four eigenstates of one block.  m0, m1 in {-1,+1}.
std::array<double, 4> expansion_coeffs(int n0, int m0, int n1, int m1,
                                       BlockIndex block, const ModelParams& p);

/// Expansion of one localized number state over all blocks with
/// N0, N1 <= n_max.
struct ExpansionTable {
    int n_max = 0;
    std::vector<std::array<double, 4>> coeffs;   // block-major: (N0*(n_max+1)+N1)
    double captured_weight = 0.0;

    const std::array<double, 4>& at(BlockIndex b) const {
        return coeffs[static_cast<std::size_t>(b.n0) * (n_max + 1) + b.n1];
    }
};

ExpansionTable expand_number_state(int n0, int m0, int n1, int m1,
                                   const ModelParams& p, int n_max);

/// Projection weights of the two N00N components onto the displaced basis
/// slot |N0,-2, N1; -1,-1>:  w_n0[b] covers |n,-1;0,-1>, w_0n[b] covers
/// |0,-1;n,-1>.  The per-block eigenbasis amplitude of the evolved state is
/// (w_n0 + c w_0n)/sqrt(1+|c|^2) times the fixed mixing column.
struct NoonProjection {
    int n_max = 0;
    std::vector<double> w_n0;
    std::vector<double> w_0n;

    std::size_t index(BlockIndex b) const {
        return static_cast<std::size_t>(b.n0) * (n_max + 1) + b.n1;
    }
    std::complex<double> weight(BlockIndex b, const InitialNoonState& s) const {
        const std::size_t i = index(b);
        return (w_n0[i] + s.c * w_0n[i]) * s.norm_factor();
    }
    /// |weight|^2 summed over all included blocks.
    double captured_weight(const InitialNoonState& s) const;
};

NoonProjection project_noon(const InitialNoonState& s, const ModelParams& p, int n_max);

/// Smallest per-mode truncation N_max with captured weight >= 1 - epsilon.
/// Throws TruncationCapError if the cap would be exceeded.
int choose_truncation(const InitialNoonState& s, const ModelParams& p,
                      double epsilon, int cap = kTruncationCap);

/// Truncated LHS and closed-form RHS of the bipartite weight-function
/// identity: sum over N0,N1 <= n_max of S S' (x/2)^(N0+N1)/(N0! N1!)
/// versus n0! n1! x^-(n0+n1) exp(2x) delta delta.
struct IdentityCheck {
    double lhs = 0.0;
    double rhs = 0.0;
};
IdentityCheck hypergeometric_identity_check(int n0, int n1, int n0p, int n1p,
                                            double x, int n_max);

/// All (n0, n1, n0', n1') combinations up to max_n in one pass, sharing the
/// per-(n0, n1) weight tables.
struct IdentityResult {
    int n0 = 0, n1 = 0, n0p = 0, n1p = 0;
    double lhs = 0.0;
    double rhs = 0.0;
};
std::vector<IdentityResult> hypergeometric_identity_grid(int max_n, double x, int n_max);

} // namespace states
} // namespace cavitynoon

#endif
