#include "cavitynoon/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cavitynoon::specfun {

// log k! for k up to the design envelope (per-mode truncation cap is 256,
// so paired quantum numbers stay well below this).
constexpr int kLogFactorialMax = 4096;

double log_factorial(int k) {
    static const std::vector<double> table = [] {
        std::vector<double> t(kLogFactorialMax + 1, 0.0);
        for (int i = 2; i <= kLogFactorialMax; ++i)
            t[i] = t[i - 1] + std::log(static_cast<double>(i));
        return t;
    }();
    if (k < 0 || k > kLogFactorialMax)
        throw std::out_of_range("log_factorial: index " + std::to_string(k));
    return table[static_cast<std::size_t>(k)];
}

double laguerre(int n, double x) {
    if (n < 0) throw std::invalid_argument("laguerre: negative degree");
    if (n == 0) return 1.0;
    double lm1 = 1.0;        // L_0
    double l = 1.0 - x;      // L_1
    for (int k = 1; k < n; ++k) {
        const double lp1 = ((2.0 * k + 1.0 - x) * l - k * lm1) / (k + 1.0);
        lm1 = l;
        l = lp1;
    }
    return l;
}

double laguerre_derivative(int n, double x) {
    if (n == 0) return 0.0;
    if (x == 0.0) return -static_cast<double>(n);
    return n * (laguerre(n, x) - laguerre(n - 1, x)) / x;
}

std::vector<double> laguerre_zeros(int n) {
    if (n < 1) throw std::invalid_argument("laguerre_zeros: degree must be positive");
    // All n roots lie in (0, 4n+2); scan for sign changes, bisect, polish.
    const double upper = 4.0 * n + 3.0;
    std::vector<double> roots;
    int grid = 64 * n + 64;
    for (int attempt = 0; attempt < 4 && static_cast<int>(roots.size()) != n; ++attempt) {
        roots.clear();
        double x_prev = 0.0;
        double f_prev = 1.0;   // L_n(0) = 1
        for (int i = 1; i <= grid; ++i) {
            const double x = upper * i / grid;
            const double f = laguerre(n, x);
            if (f == 0.0) {
                roots.push_back(x);
            } else if (f_prev * f < 0.0) {
                double lo = x_prev, hi = x;
                double flo = f_prev;
                for (int it = 0; it < 200; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double fm = laguerre(n, mid);
                    if (fm == 0.0) {
                        lo = hi = mid;
                        break;
                    }
                    if (flo * fm < 0.0) {
                        hi = mid;
                    } else {
                        lo = mid;
                        flo = fm;
                    }
                    if (hi - lo <= 1e-14 * hi) break;
                }
                double r = 0.5 * (lo + hi);
                for (int it = 0; it < 8; ++it) {
                    const double f0 = laguerre(n, r);
                    const double d0 = laguerre_derivative(n, r);
                    if (d0 == 0.0) break;
                    const double step = f0 / d0;
                    r -= step;
                    if (std::abs(step) <= 1e-15 * r) break;
                }
                roots.push_back(r);
            }
            x_prev = x;
            f_prev = f;
        }
        grid *= 4;
    }
    if (static_cast<int>(roots.size()) != n)
        throw std::runtime_error("laguerre_zeros: root count mismatch for n=" + std::to_string(n));
    std::sort(roots.begin(), roots.end());
    return roots;
}

double laguerre_zero(int n, int k) {
    if (n < 1) throw std::out_of_range("laguerre_zero: degree must be positive");
    if (k < 1 || k > n) throw std::out_of_range("laguerre_zero: index out of range");
    return laguerre_zeros(n)[static_cast<std::size_t>(k) - 1];
}

double hyp2f0_terminating(int m, int n, double tau) {
    if (m < 0 || n < 0)
        throw std::invalid_argument("hyp2f0_terminating: parameters must be -m, -n with m, n >= 0");
    const int terms = std::min(m, n);
    NeumaierSum sum;
    double term = 1.0;
    sum.add(term);
    for (int l = 0; l < terms; ++l) {
        // (-m)_{l+1}(-n)_{l+1}/( -m)_l(-n)_l * tau/(l+1)
        term *= static_cast<double>(l - m) * static_cast<double>(l - n) * tau / (l + 1.0);
        sum.add(term);
    }
    return sum.value();
}

double displaced_overlap(const OverlapKey& key, const ModelParams& p) {
    const auto shift_ok = [](int s) { return s == -2 || s == 0 || s == 2; };
    if (!shift_ok(key.bra_shift) || !shift_ok(key.ket_shift))
        throw std::invalid_argument("displaced_overlap: shift outside {-2, 0, +2}");
    if (key.bra_n < 0 || key.ket_n < 0)
        throw std::invalid_argument("displaced_overlap: negative quantum number");
    if (key.mode != 0 && key.mode != 1)
        throw std::invalid_argument("displaced_overlap: mode must be 0 or 1");
    const double omega_j = p.omega_mode(key.mode);
    if (!(omega_j > 0.0))
        throw std::invalid_argument("displaced_overlap: nonpositive mode frequency");

    const int m = key.bra_n;
    const int n = key.ket_n;
    const int d = key.ket_shift - key.bra_shift;   // net displacement multiplier
    if (d == 0 || p.lambda == 0.0) return m == n ? 1.0 : 0.0;

    // <M| D(beta) |N> with |beta| = |d| lambda / (sqrt2 Omega_j); the
    // one-sided (sqrt2 lambda/Omega)^{M+N} and opposite-shift
    // (2 sqrt2 lambda/Omega)^{M+N} scalings are the |d| = 2 and |d| = 4 cases.
    const double beta = std::abs(d) * p.lambda / (std::sqrt(2.0) * omega_j);
    const double log_beta = std::log(beta);
    const double log_pref = 0.5 * (log_factorial(m) + log_factorial(n)) - 0.5 * beta * beta;

    NeumaierSum sum;
    const int terms = std::min(m, n);
    for (int l = 0; l <= terms; ++l) {
        const double log_mag = (m + n - 2 * l) * log_beta + log_pref -
                               log_factorial(m - l) - log_factorial(n - l) - log_factorial(l);
        const double t = std::exp(log_mag);
        sum.add((l % 2 == 0) ? t : -t);
    }
    double value = ((m % 2 == 0) ? 1.0 : -1.0) * sum.value();
    if (d < 0 && (m + n) % 2 != 0) value = -value;   // reflection: opposite displacement sign
    return value;
}

int OverlapTable::shift_slot(int shift) {
    switch (shift) {
        case -2: return 0;
        case 0: return 1;
        case 2: return 2;
        default: throw std::invalid_argument("OverlapTable: shift outside {-2, 0, +2}");
    }
}

OverlapTable::OverlapTable(const ModelParams& p, int n_max)
    : n_max_(n_max), dim_(static_cast<std::size_t>(n_max) + 1) {
    if (n_max < 0) throw std::invalid_argument("OverlapTable: negative truncation");
    const int shifts[3] = {-2, 0, 2};
    for (int mode = 0; mode < 2; ++mode)
        for (int bs : shifts)
            for (int ks : shifts) {
                auto& mat = mats_[plane(mode, bs, ks)];
                mat.assign(dim_ * dim_, 0.0);
                for (int m = 0; m <= n_max; ++m)
                    for (int n = 0; n <= n_max; ++n)
                        mat[static_cast<std::size_t>(m) * dim_ + n] =
                            displaced_overlap({m, n, bs, ks, mode}, p);
            }
}

} // namespace cavitynoon::specfun
