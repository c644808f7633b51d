#ifndef CAVITYNOON_SPECFUN_HPP
#define CAVITYNOON_SPECFUN_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "cavitynoon/model.hpp"

namespace cavitynoon::specfun {

/// Compensated (Neumaier) accumulator; tracks the low-order bits lost when
/// adding terms of mixed magnitude and sign.
struct NeumaierSum {
    double sum = 0.0;
    double comp = 0.0;
    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

/// log k!, table-backed (k up to 4096, well past the truncation envelope).
double log_factorial(int k);

/// Laguerre polynomial L_n(x) by the three-term recurrence.
double laguerre(int n, double x);

/// d/dx L_n(x), from x L_n'(x) = n (L_n(x) - L_{n-1}(x)).
double laguerre_derivative(int n, double x);

/// k-th smallest positive root of L_n (1-based k).  Bisection on sign
/// changes of the recurrence, polished by Newton.  Throws std::out_of_range
/// unless 1 <= k <= n.
double laguerre_zero(int n, int k);

/// All n roots of L_n, ascending.
std::vector<double> laguerre_zeros(int n);

/// Terminating 2F0(-m, -n; -; tau) = sum_{l<=min(m,n)} (-m)_l (-n)_l tau^l / l!,
/// compensated summation.  Exactly symmetric in (m, n).
double hyp2f0_terminating(int m, int n, double tau);

/// Scalar product of shifted (displaced) number states of one delocalized
/// mode.  Shifts are the +-2 multipliers of the displacement lambda/(sqrt2
/// Omega_mode) used by the adiabatic basis; 0 means undisplaced.
struct OverlapKey {
    int bra_n = 0;       // M
    int ket_n = 0;       // N
    int bra_shift = 0;   // in {-2, 0, +2}
    int ket_shift = 0;   // in {-2, 0, +2}
    int mode = 0;        // 0 -> Omega0, 1 -> Omega1
};

/// <M_{j,braShift} | N_{j,ketShift}> for the mode's frequency Omega_j.
/// Equal shifts give delta_{MN}; opposite and one-sided shifts follow the
/// closed 2F0 forms with the (2 sqrt2 lambda/Omega)^{M+N} and
/// (sqrt2 lambda/Omega)^{M+N} scalings.  At lambda = 0 all shift pairs give
/// delta_{MN}.  Throws std::invalid_argument for shifts outside {-2, 0, +2}
/// or negative quantum numbers.
double displaced_overlap(const OverlapKey& key, const ModelParams& p);

/// Precomputed overlap matrices for both modes and all shift pairs up to a
/// truncation.  Built once, then read-only; safe for concurrent readers.
class OverlapTable {
public:
    OverlapTable() = default;
    OverlapTable(const ModelParams& p, int n_max);

    int n_max() const { return n_max_; }

    /// <M_{mode,bra_shift} | N_{mode,ket_shift}>, table lookup.
    double get(int mode, int bra_shift, int ket_shift, int m, int n) const {
        return mats_[plane(mode, bra_shift, ket_shift)][static_cast<std::size_t>(m) * dim_ + n];
    }

    /// Whole (n_max+1)^2 overlap matrix for one mode and shift pair,
    /// row-major over (M, N).
    const std::vector<double>& matrix(int mode, int bra_shift, int ket_shift) const {
        return mats_[plane(mode, bra_shift, ket_shift)];
    }

private:
    static int shift_slot(int shift);
    std::size_t plane(int mode, int bra_shift, int ket_shift) const {
        return static_cast<std::size_t>(mode) * 9 + shift_slot(bra_shift) * 3 + shift_slot(ket_shift);
    }

    int n_max_ = -1;
    std::size_t dim_ = 0;
    std::array<std::vector<double>, 18> mats_{};
};

} // namespace cavitynoon::specfun

#endif
