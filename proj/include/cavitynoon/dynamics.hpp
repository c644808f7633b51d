#ifndef CAVITYNOON_DYNAMICS_HPP
#define CAVITYNOON_DYNAMICS_HPP

#include <complex>
#include <cstddef>
#include <vector>

#include "cavitynoon/linalg.hpp"
#include "cavitynoon/model.hpp"
#include "cavitynoon/specfun.hpp"
#include "cavitynoon/states.hpp"

namespace cavitynoon {

/// Two-qubit reduced density matrix over the ordered basis
/// (|-1,-1>, |-1,1>, |1,-1>, |1,1>), tagged with the dimensionless instant
/// omega*t it was evaluated at.
struct QubitDensityMatrix {
    linalg::Mat4 rho;
    double omega_t = 0.0;

    double trace_real() const;
    double hermiticity_error() const;   // max |rho - rho^dagger|
    double min_eigenvalue() const;
    double purity() const;              // Tr rho^2
};

enum class RhoMethod {
    FirstPrinciples,   // partial trace of the evolved state expansion
    ElementFormulas,   // transcribed closed-form matrix elements
};

/// Pair-of-blocks kernel G(<N>;<N'>) built from the C0 coefficients and the
/// (F + c F') products; Hermitian with unit diagonal sum under truncation.
struct EvolutionKernel {
    int n_max = 0;
    std::vector<std::complex<double>> entries;   // (block, block') dense

    std::size_t blocks() const { return static_cast<std::size_t>(n_max + 1) * (n_max + 1); }
    std::complex<double> at(BlockIndex n, BlockIndex np) const {
        const std::size_t d = static_cast<std::size_t>(n_max) + 1;
        return entries[(n.n0 * d + n.n1) * blocks() + (np.n0 * d + np.n1)];
    }
    std::complex<double> diagonal_sum() const;
};

/// Precomputed closed-form evolution of one N00N-type initial state:
/// block spectra, projection weights and shifted-state overlap tables.
/// Evaluation at any instant is then O(blocks^2) complex arithmetic with no
/// time stepping; instances are immutable after construction and safe to
/// share across threads.
class NoonSimulator {
public:
    NoonSimulator(const InitialNoonState& state, const ModelParams& params,
                  double epsilon, int cap = states::kTruncationCap);

    const InitialNoonState& state() const { return state_; }
    const ModelParams& params() const { return params_; }
    int n_max() const { return n_max_; }
    double captured_weight() const { return captured_weight_; }
    double epsilon() const { return epsilon_; }

    QubitDensityMatrix reduced_density(double omega_t,
                                       RhoMethod method = RhoMethod::FirstPrinciples) const;

    EvolutionKernel kernel() const;
    const BlockSpectrum& spectrum(BlockIndex b) const { return spectra_[index(b)]; }

private:
    std::size_t index(BlockIndex b) const {
        return static_cast<std::size_t>(b.n0) * (n_max_ + 1) + b.n1;
    }
    QubitDensityMatrix rho_first_principles(double t) const;
    QubitDensityMatrix rho_element_formulas(double t) const;

    InitialNoonState state_;
    ModelParams params_;
    double epsilon_ = 0.0;
    int n_max_ = 0;
    double captured_weight_ = 0.0;
    states::NoonProjection projection_;
    std::vector<BlockSpectrum> spectra_;
    std::vector<std::complex<double>> weights_;   // (w_n0 + c w_0n) normalized
    specfun::OverlapTable overlaps_;
};

/// One-off evaluation; builds the tables, evaluates, discards.
QubitDensityMatrix reduced_density(const InitialNoonState& state, const ModelParams& params,
                                   double omega_t, RhoMethod method = RhoMethod::FirstPrinciples,
                                   double epsilon = 1e-10);

EvolutionKernel build_kernel(const InitialNoonState& state, const states::NoonProjection& proj,
                             const ModelParams& params);

struct TracePoint {
    double omega_t = 0.0;
    double concurrence = 0.0;
    QubitDensityMatrix rho;
};

/// Closed-form evaluation per grid point (points are independent and are
/// evaluated in parallel; see CAVITY_NOON_THREADS).
std::vector<TracePoint> concurrence_trace(const InitialNoonState& state,
                                          const ModelParams& params,
                                          const std::vector<double>& omega_t_grid,
                                          double epsilon = 1e-10);

/// Elementwise audit of the transcribed matrix-element formulas against the
/// first-principles partial trace.
struct CrosscheckReport {
    double max_deviation = 0.0;            // over all elements and samples
    double max_diagonal_deviation = 0.0;   // diagonal elements only
    std::array<std::array<double, 4>, 4> elementwise{};  // per-element max
};

CrosscheckReport crosscheck_formulas(const InitialNoonState& state, const ModelParams& params,
                                     const std::vector<double>& omega_t_samples,
                                     double epsilon = 1e-10);

} // namespace cavitynoon

#endif
