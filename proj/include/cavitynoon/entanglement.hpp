#ifndef CAVITYNOON_ENTANGLEMENT_HPP
#define CAVITYNOON_ENTANGLEMENT_HPP

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cavitynoon/dynamics.hpp"
#include "cavitynoon/linalg.hpp"

namespace cavitynoon::entanglement {

/// Spin-flip conjugate (sigma_y x sigma_y) rho* (sigma_y x sigma_y),
/// evaluated as the fixed index/sign permutation.
linalg::Mat4 spin_flip(const linalg::Mat4& rho);

/// Wootters concurrence max{0, sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4)}
/// from the spectrum of rho * spin_flip(rho).  Throws std::invalid_argument
/// when the input is not a density matrix to tolerance (non-Hermitian, trace
/// far from 1, or an eigenvalue of the product below -1e-10 after scaling).
double concurrence(const linalg::Mat4& rho);

/// Generalized Bell basis over (|-1,-1>,|-1,1>,|1,-1>,|1,1>):
///   phi+- = (|1,1> +- i |-1,-1>)/sqrt2   (equal spins)
///   psi+- = (|1,-1> +- i |-1,1>)/sqrt2   (mixed spins)
enum class BellLabel { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

std::string to_string(BellLabel label);

/// Nearest pure state in Hilbert-Schmidt distance, expressed in the
/// generalized Bell basis.  Since d_HS^2 = Tr rho^2 + 1 - 2 <Phi|rho|Phi>,
/// the minimizer is the dominant eigenvector of rho; global phase fixed by
/// making the largest-magnitude coefficient real positive.
struct BellFit {
    std::complex<double> alpha;   // phi+
    std::complex<double> beta;    // phi-
    std::complex<double> gamma;   // psi+
    std::complex<double> delta;   // psi-
    double distance = 0.0;
    BellLabel dominant = BellLabel::PhiPlus;
    bool degenerate_top = false;  // top eigenvalue gap below 1e-10
};

BellFit bell_fit(const linalg::Mat4& rho);

/// Same objective restricted to real coefficient mixtures of the generalized
/// Bell states (the variational family the published distance table follows).
/// Closed form: top eigenvector of Re <bell_i|rho|bell_j>.
BellFit bell_fit_real(const linalg::Mat4& rho);

/// Maximal runs where the concurrence stays at zero within tolerance.
struct SuddenDeathReport {
    struct Interval {
        double t_start = 0.0;
        double t_end = 0.0;
        double duration() const { return t_end - t_start; }
    };
    std::vector<Interval> intervals;   // disjoint, ascending
    double longest_duration = 0.0;
};

/// Runs of >= 3 consecutive samples with C <= zero_tol become intervals.
/// When `refine` is provided the interval endpoints are sharpened by
/// bisection on the concurrence function between the bracketing samples.
SuddenDeathReport detect_sudden_death(const std::vector<TracePoint>& trace, double zero_tol,
                                      const std::optional<std::function<double(double)>>& refine = std::nullopt);

} // namespace cavitynoon::entanglement

#endif
