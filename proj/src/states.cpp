#include "cavitynoon/states.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "cavitynoon/specfun.hpp"

namespace cavitynoon::states {

namespace {

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
    return b;
}

struct LogValue {
    double log_mag = 0.0;
    double sign = 0.0;   // 0 encodes an exact zero
};

LogValue coeff_C_log(int mode, int n0, int n1, BlockIndex block, int sign,
                     const ModelParams& p) {
    const int exponent = n0 + n1 + block.n0 + block.n1;
    if (p.lambda == 0.0) {
        if (exponent == 0) return {0.0, 1.0};
        return {0.0, 0.0};
    }
    const double omega_j = p.omega_mode(mode);
    const double ratio = p.lambda / omega_j;
    LogValue v;
    v.sign = (sign < 0 && exponent % 2 != 0) ? -1.0 : 1.0;
    v.log_mag = -ratio * ratio + exponent * std::log(ratio) -
                0.5 * (block.n0 + block.n1) * std::log(2.0) -
                0.5 * (specfun::log_factorial(n0) + specfun::log_factorial(n1) +
                       specfun::log_factorial(block.n0) + specfun::log_factorial(block.n1));
    return v;
}

// 2F0(-n, -K; -; tau) for K = 0..k_max, reused across the double sums.
std::vector<double> hyp_row(int n, int k_max, double tau) {
    std::vector<double> row(static_cast<std::size_t>(k_max) + 1);
    for (int k = 0; k <= k_max; ++k) row[k] = specfun::hyp2f0_terminating(n, k, tau);
    return row;
}

double weight_F_with_rows(int mode, BlockIndex block, const std::vector<double>& h_first,
                          const std::vector<double>& h_second) {
    const int total = block.n0 + block.n1;
    specfun::NeumaierSum sum;
    for (int k = 0; k <= block.n0; ++k) {
        const double bk = binomial(block.n0, k);
        for (int l = 0; l <= block.n1; ++l) {
            const int parity = (mode == 0) ? l : k;
            const double term = bk * binomial(block.n1, l) * h_first[k + l] * h_second[total - k - l];
            sum.add((parity % 2 == 0) ? term : -term);
        }
    }
    return sum.value();
}

} // namespace

double coeff_C(int mode, int n0, int n1, BlockIndex block, int sign, const ModelParams& p) {
    const LogValue v = coeff_C_log(mode, n0, n1, block, sign, p);
    return v.sign == 0.0 ? 0.0 : v.sign * std::exp(v.log_mag);
}

double weight_F(int mode, int n0, int n1, BlockIndex block, const ModelParams& p) {
    if (p.lambda == 0.0)
        throw std::domain_error("weight_F: lambda = 0 is only removable in the C*F product");
    const double omega_j = p.omega_mode(mode);
    const double tau = -(omega_j * omega_j) / (p.lambda * p.lambda);
    const int total = block.n0 + block.n1;
    return weight_F_with_rows(mode, block, hyp_row(n0, total, tau), hyp_row(n1, total, tau));
}

double mode_mixing_overlap(int cap_n0, int cap_n1, int n0, int n1) {
    if (cap_n0 < 0 || cap_n1 < 0 || n0 < 0 || n1 < 0)
        throw std::invalid_argument("mode_mixing_overlap: negative quantum number");
    if (cap_n0 + cap_n1 != n0 + n1) return 0.0;
    specfun::NeumaierSum sum;
    for (int i = std::max(0, cap_n0 - n1); i <= std::min(n0, cap_n0); ++i) {
        const int j = cap_n0 - i;
        const double term = binomial(n0, i) * binomial(n1, j);
        sum.add(((n1 - j) % 2 == 0) ? term : -term);
    }
    const double log_scale = 0.5 * (specfun::log_factorial(cap_n0) + specfun::log_factorial(cap_n1) -
                                    specfun::log_factorial(n0) - specfun::log_factorial(n1)) -
                             0.5 * (n0 + n1) * std::log(2.0);
    return sum.value() * std::exp(log_scale);
}

double cf_product(int mode, int n0, int n1, BlockIndex block, const ModelParams& p) {
    if (p.lambda == 0.0) {
        // removable 0*inf limit; the product degenerates to the mode-mixing
        // overlap times the sign the projection formulas carry
        const double bs = mode_mixing_overlap(block.n0, block.n1, n0, n1);
        const int sign_pow = (mode == 0) ? (n0 + n1 + block.n1) : (n0 + block.n0);
        return (sign_pow % 2 == 0) ? bs : -bs;
    }
    const double f = weight_F(mode, n0, n1, block, p);
    if (f == 0.0) return 0.0;
    const LogValue c = coeff_C_log(mode, n0, n1, block, +1, p);
    const double sgn = c.sign * (f < 0.0 ? -1.0 : 1.0);
    return sgn * std::exp(c.log_mag + std::log(std::abs(f)));
}

std::array<double, 4> expansion_coeffs(int n0, int m0, int n1, int m1,
                                       BlockIndex block, const ModelParams& p) {
    if ((m0 != -1 && m0 != 1) || (m1 != -1 && m1 != 1))
        throw std::invalid_argument("expansion_coeffs: qubit labels must be +-1");

    // projections of |n0,m0;n1,m1> onto the four displaced basis slots
    std::array<double, 4> proj{};
    const auto sign_of = [](int power) { return (power % 2 == 0) ? 1.0 : -1.0; };
    if (m0 == 1 && m1 == 1)
        proj[0] = sign_of(n0 + n1 + block.n1) * cf_product(0, n0, n1, block, p);
    if (m0 == -1 && m1 == -1)
        proj[1] = sign_of(block.n0) * cf_product(0, n0, n1, block, p);
    if (m0 == 1 && m1 == -1)
        proj[2] = sign_of(n0 + block.n0) * cf_product(1, n0, n1, block, p);
    if (m0 == -1 && m1 == 1)
        proj[3] = sign_of(n1 + block.n1) * cf_product(1, n0, n1, block, p);

    const BlockSpectrum s = block_spectrum(p, block);
    std::array<double, 4> c{};
    for (int j = 0; j < 4; ++j)
        for (int b = 0; b < 4; ++b) c[j] += s.mixing[j][b] * proj[b];
    return c;
}

ExpansionTable expand_number_state(int n0, int m0, int n1, int m1,
                                   const ModelParams& p, int n_max) {
    ExpansionTable t;
    t.n_max = n_max;
    t.coeffs.resize(static_cast<std::size_t>(n_max + 1) * (n_max + 1));
    specfun::NeumaierSum weight;
    for (int b0 = 0; b0 <= n_max; ++b0)
        for (int b1 = 0; b1 <= n_max; ++b1) {
            const auto c = expansion_coeffs(n0, m0, n1, m1, {b0, b1}, p);
            t.coeffs[static_cast<std::size_t>(b0) * (n_max + 1) + b1] = c;
            weight.add(c[0] * c[0] + c[1] * c[1] + c[2] * c[2] + c[3] * c[3]);
        }
    t.captured_weight = weight.value();
    return t;
}

double NoonProjection::captured_weight(const InitialNoonState& s) const {
    specfun::NeumaierSum sum;
    for (std::size_t i = 0; i < w_n0.size(); ++i)
        sum.add(std::norm(w_n0[i] + s.c * w_0n[i]));
    return sum.value() * s.norm_factor() * s.norm_factor();
}

NoonProjection project_noon(const InitialNoonState& s, const ModelParams& p, int n_max) {
    s.validate();
    NoonProjection proj;
    proj.n_max = n_max;
    const std::size_t count = static_cast<std::size_t>(n_max + 1) * (n_max + 1);
    proj.w_n0.resize(count);
    proj.w_0n.resize(count);

    if (p.lambda == 0.0) {
        for (int b0 = 0; b0 <= n_max; ++b0)
            for (int b1 = 0; b1 <= n_max; ++b1) {
                const std::size_t i = proj.index({b0, b1});
                const double parity = (b0 % 2 == 0) ? 1.0 : -1.0;
                proj.w_n0[i] = parity * cf_product(0, s.n, 0, {b0, b1}, p);
                proj.w_0n[i] = parity * cf_product(0, 0, s.n, {b0, b1}, p);
            }
        return proj;
    }

    // shared 2F0 rows: the second photon index of both components is 0, so
    // its row is identically 1
    const double omega0 = p.omega0();
    const double tau = -(omega0 * omega0) / (p.lambda * p.lambda);
    const std::vector<double> h_n = hyp_row(s.n, 2 * n_max, tau);
    const std::vector<double> h_0(static_cast<std::size_t>(2 * n_max) + 1, 1.0);

    for (int b0 = 0; b0 <= n_max; ++b0)
        for (int b1 = 0; b1 <= n_max; ++b1) {
            const BlockIndex block{b0, b1};
            const std::size_t i = proj.index(block);
            const LogValue c = coeff_C_log(0, s.n, 0, block, +1, p);
            const double parity = (b0 % 2 == 0) ? 1.0 : -1.0;
            const auto attach = [&](double f) {
                if (f == 0.0 || c.sign == 0.0) return 0.0;
                const double sgn = (f < 0.0 ? -1.0 : 1.0) * c.sign * parity;
                return sgn * std::exp(c.log_mag + std::log(std::abs(f)));
            };
            proj.w_n0[i] = attach(weight_F_with_rows(0, block, h_n, h_0));
            proj.w_0n[i] = attach(weight_F_with_rows(0, block, h_0, h_n));
        }
    return proj;
}

int choose_truncation(const InitialNoonState& s, const ModelParams& p,
                      double epsilon, int cap) {
    if (!(epsilon > 0.0) || !(epsilon < 1.0))
        throw std::invalid_argument("choose_truncation: epsilon must lie in (0, 1)");
    p.validate();
    s.validate();

    // Captured weight grows monotonically with the truncation ring; keep the
    // incremental ring sums until the target is met.
    const double target = 1.0 - epsilon;
    specfun::NeumaierSum weight;
    const double nf2 = s.norm_factor() * s.norm_factor();
    for (int ring = 0; ring <= cap; ++ring) {
        const auto add_block = [&](BlockIndex b) {
            const double parity = (b.n0 % 2 == 0) ? 1.0 : -1.0;
            const double wn0 = parity * cf_product(0, s.n, 0, b, p);
            const double w0n = parity * cf_product(0, 0, s.n, b, p);
            weight.add(std::norm(wn0 + s.c * w0n) * nf2);
        };
        for (int b1 = 0; b1 < ring; ++b1) add_block({ring, b1});
        for (int b0 = 0; b0 < ring; ++b0) add_block({b0, ring});
        add_block({ring, ring});
        if (weight.value() >= target) return ring;
    }
    char detail[96];
    std::snprintf(detail, sizeof(detail), "%d (epsilon=%g)", cap, epsilon);
    throw TruncationCapError(std::string("choose_truncation: N_max would exceed the cap of ") + detail);
}

namespace {

// The identity sum cancels to zero (off-diagonal photon indices) across
// summands of magnitude up to ~ (n0! n1!)^2 / x^(2(n0+n1)), far beyond what
// double-precision accumulation can resolve at small x, so the whole
// evaluation runs in binary128 (plain arithmetic only, no libquadmath).
using quad = __float128;

// S_{n0,n1}(N0,N1) tables over all blocks N0,N1 <= n_max; 2F0 rows and the
// (-1)^k C C double sum all in extended precision.
std::vector<quad> weight_S_table(int n0, int n1, double x, int n_max) {
    const quad tau = quad{-1.0} / static_cast<quad>(x);
    const int k_max = 2 * n_max;
    const auto hyp_row_q = [&](int n) {
        std::vector<quad> row(static_cast<std::size_t>(k_max) + 1);
        for (int k = 0; k <= k_max; ++k) {
            quad term = 1.0;
            quad acc = 1.0;
            const int terms = std::min(n, k);
            for (int l = 0; l < terms; ++l) {
                term *= static_cast<quad>(l - n) * static_cast<quad>(l - k) * tau /
                        static_cast<quad>(l + 1);
                acc += term;
            }
            row[k] = acc;
        }
        return row;
    };
    const std::vector<quad> h0 = hyp_row_q(n0);
    const std::vector<quad> h1 = hyp_row_q(n1);

    std::vector<quad> table(static_cast<std::size_t>(n_max + 1) * (n_max + 1));
    std::vector<quad> binom0(static_cast<std::size_t>(n_max) + 1);
    std::vector<quad> binom1(static_cast<std::size_t>(n_max) + 1);
    for (int b0 = 0; b0 <= n_max; ++b0) {
        binom0[0] = 1.0;
        for (int k = 1; k <= b0; ++k)
            binom0[k] = binom0[k - 1] * static_cast<quad>(b0 - k + 1) / static_cast<quad>(k);
        for (int b1 = 0; b1 <= n_max; ++b1) {
            binom1[0] = 1.0;
            for (int l = 1; l <= b1; ++l)
                binom1[l] = binom1[l - 1] * static_cast<quad>(b1 - l + 1) / static_cast<quad>(l);
            quad acc = 0.0;
            for (int k = 0; k <= b0; ++k) {
                const quad sign = (k % 2 == 0) ? quad{1.0} : quad{-1.0};
                for (int l = 0; l <= b1; ++l)
                    acc += sign * binom0[k] * binom1[l] * h0[k + l] * h1[b0 + b1 - k - l];
            }
            table[static_cast<std::size_t>(b0) * (n_max + 1) + b1] = acc;
        }
    }
    return table;
}

double identity_lhs(const std::vector<quad>& s_table, const std::vector<quad>& sp_table,
                    double x, int n_max) {
    const quad half_x = static_cast<quad>(x) / 2;
    quad acc = 0.0;
    quad w0 = 1.0;   // (x/2)^b0 / b0!
    for (int b0 = 0; b0 <= n_max; ++b0) {
        if (b0 > 0) w0 *= half_x / static_cast<quad>(b0);
        quad w = w0;
        for (int b1 = 0; b1 <= n_max; ++b1) {
            if (b1 > 0) w *= half_x / static_cast<quad>(b1);
            const std::size_t i = static_cast<std::size_t>(b0) * (n_max + 1) + b1;
            acc += s_table[i] * sp_table[i] * w;
        }
    }
    return static_cast<double>(acc);
}

double identity_rhs(int n0, int n1, int n0p, int n1p, double x) {
    if (n0 != n0p || n1 != n1p) return 0.0;
    return std::exp(specfun::log_factorial(n0) + specfun::log_factorial(n1) -
                    (n0 + n1) * std::log(x) + 2.0 * x);
}

} // namespace

IdentityCheck hypergeometric_identity_check(int n0, int n1, int n0p, int n1p,
                                            double x, int n_max) {
    if (!(x > 0.0)) throw std::invalid_argument("hypergeometric_identity_check: x must be positive");
    const auto s_table = weight_S_table(n0, n1, x, n_max);
    const auto sp_table = (n0 == n0p && n1 == n1p)
                              ? s_table
                              : weight_S_table(n0p, n1p, x, n_max);
    return {identity_lhs(s_table, sp_table, x, n_max), identity_rhs(n0, n1, n0p, n1p, x)};
}

std::vector<IdentityResult> hypergeometric_identity_grid(int max_n, double x, int n_max) {
    if (!(x > 0.0)) throw std::invalid_argument("hypergeometric_identity_grid: x must be positive");
    const int pairs = (max_n + 1) * (max_n + 1);
    std::vector<std::vector<quad>> tables(static_cast<std::size_t>(pairs));
    for (int n0 = 0; n0 <= max_n; ++n0)
        for (int n1 = 0; n1 <= max_n; ++n1)
            tables[static_cast<std::size_t>(n0) * (max_n + 1) + n1] = weight_S_table(n0, n1, x, n_max);

    std::vector<IdentityResult> out;
    out.reserve(static_cast<std::size_t>(pairs) * pairs);
    for (int n0 = 0; n0 <= max_n; ++n0)
        for (int n1 = 0; n1 <= max_n; ++n1)
            for (int n0p = 0; n0p <= max_n; ++n0p)
                for (int n1p = 0; n1p <= max_n; ++n1p) {
                    const auto& s = tables[static_cast<std::size_t>(n0) * (max_n + 1) + n1];
                    const auto& sp = tables[static_cast<std::size_t>(n0p) * (max_n + 1) + n1p];
                    out.push_back({n0, n1, n0p, n1p, identity_lhs(s, sp, x, n_max),
                                   identity_rhs(n0, n1, n0p, n1p, x)});
                }
    return out;
}

} // namespace cavitynoon::states
