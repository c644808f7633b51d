#ifndef CAVITYNOON_MODEL_HPP
#define CAVITYNOON_MODEL_HPP

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace cavitynoon {

/// Parameter set out of physical range (e.g. |nu| >= omega).
class PhysicsDomainError : public std::runtime_error {
public:
    explicit PhysicsDomainError(const std::string& what) : std::runtime_error(what) {}
};

/// Physical constants of the two-cavity system, natural units (hbar = 1).
/// omega: oscillator frequency, delta: qubit splitting, lambda: qubit-oscillator
/// coupling, nu: photon hopping. The delocalized modes carry the split
/// frequencies Omega0 = omega + nu and Omega1 = omega - nu.
struct ModelParams {
    double omega = 1.0;
    double delta = 0.0;
    double lambda = 0.0;
    double nu = 0.0;

    double omega0() const { return omega + nu; }
    double omega1() const { return omega - nu; }
    double omega_mode(int mode) const { return mode == 0 ? omega0() : omega1(); }

    /// Throws PhysicsDomainError unless omega > 0, delta >= 0, lambda >= 0
    /// and both delocalized frequencies are positive (|nu| < omega).
    void validate() const;

    /// True when delta/omega is large enough that the slow/fast timescale
    /// separation is questionable (delta/omega > 0.25). Warning, not error.
    bool adiabatic_flagged() const { return delta > 0.25 * omega; }
};

/// Delocalized photon quantum numbers (N0, N1) labelling one 4x4 block.
struct BlockIndex {
    int n0 = 0;
    int n1 = 0;
    friend bool operator==(const BlockIndex&, const BlockIndex&) = default;
};

inline double gamma_plus(const ModelParams& p) {
    return p.lambda * p.lambda * (1.0 / p.omega0() + 1.0 / p.omega1());
}

inline double gamma_minus(const ModelParams& p) {
    return p.lambda * p.lambda * (1.0 / p.omega0() - 1.0 / p.omega1());
}

/// Off-diagonal element of the block Hamiltonian,
///   Lambda = -(delta/2) exp(-lambda^2 (1/Omega0^2 + 1/Omega1^2))
///            * L_{N0}(2 lambda^2/Omega0^2) * L_{N1}(2 lambda^2/Omega1^2).
/// The exponent is the one produced by the displaced-number-state overlaps;
/// see the note in model.cpp.
double lambda_of_block(const ModelParams& p, BlockIndex block);

/// Eigensystem of one (N0, N1) block.
///
/// Eigenstates are indexed j = 0, 1, 2, 3 for (E0, E1, E+, E-).  `mixing`
/// stores the eigenstates as rows over the fixed displaced tensor basis
///   column 0: |N0,+2, N1;  1, 1>
///   column 1: |N0,-2, N1; -1,-1>
///   column 2: |N0, N1,+2;  1,-1>
///   column 3: |N0, N1,-2; -1, 1>
/// The rows are real and orthonormal.  `parity` holds +-1 labels,
/// (-1)^(N0+N1) for E0/E1 and (-1)^(N0+N1+1) for E+-.
struct BlockSpectrum {
    BlockIndex block;
    double cal_n = 0.0;        // N = Omega0 N0 + Omega1 N1
    double gamma_plus = 0.0;
    double gamma_minus = 0.0;
    double lambda_n = 0.0;     // Lambda_<N>
    double chi_n = 0.0;        // chi = sqrt(4 Lambda^2 + Gamma_-^2)
    std::array<double, 4> energy{};            // E0, E1, E+, E-
    std::array<std::array<double, 4>, 4> mixing{};
    std::array<int, 4> parity{};
    bool degenerate = false;   // Lambda at (or numerically on) a Laguerre zero
};

BlockSpectrum block_spectrum(const ModelParams& p, BlockIndex block);

/// All couplings 0 < lambda <= lambda_max where Lambda_<N> vanishes, i.e.
/// lambda = Omega_j sqrt(x_k/2) over the zeros x_k of L_{N0} (j = 0) and
/// L_{N1} (j = 1).  Sorted ascending, deduplicated at 1e-12.  p.lambda is
/// ignored.
std::vector<double> degeneracy_couplings(const ModelParams& p, BlockIndex block,
                                         double lambda_max);

struct SweepRow {
    double lambda = 0.0;
    std::array<double, 4> energy{};   // E0, E1, E+, E-
    std::array<int, 4> parity{};
};

/// Block energies along a coupling grid (p.lambda ignored).
std::vector<SweepRow> energy_sweep(const ModelParams& p, BlockIndex block,
                                   const std::vector<double>& lambda_grid);

} // namespace cavitynoon

#endif
