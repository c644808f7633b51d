#include "cavitynoon/model.hpp"

#include <algorithm>
#include <cmath>

#include "cavitynoon/specfun.hpp"

namespace cavitynoon {

void ModelParams::validate() const {
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw PhysicsDomainError("omega must be positive and finite");
    if (delta < 0.0 || !std::isfinite(delta))
        throw PhysicsDomainError("delta must be nonnegative and finite");
    if (lambda < 0.0 || !std::isfinite(lambda))
        throw PhysicsDomainError("lambda must be nonnegative and finite");
    if (!std::isfinite(nu) || !(omega0() > 0.0) || !(omega1() > 0.0))
        throw PhysicsDomainError("|nu| must be < omega so both delocalized frequencies stay positive");
}

// Exponential prefactor of Lambda_<N>.  The block off-diagonals are products
// of two equal-N displaced-state overlaps, each carrying exp(-lambda^2 /
// Omega_j^2); the energy combination Gamma_+ = lambda^2 (1/Omega0 + 1/Omega1)
// that shifts E+- is a different quantity and does not belong here (it is not
// even dimensionless).  The Laguerre arguments and the Table-1-scale dynamics
// both confirm the squared-frequency form.
static double lambda_exponent(const ModelParams& p) {
    const double l2 = p.lambda * p.lambda;
    return l2 * (1.0 / (p.omega0() * p.omega0()) + 1.0 / (p.omega1() * p.omega1()));
}

double lambda_of_block(const ModelParams& p, BlockIndex block) {
    const double l2 = p.lambda * p.lambda;
    const double x0 = 2.0 * l2 / (p.omega0() * p.omega0());
    const double x1 = 2.0 * l2 / (p.omega1() * p.omega1());
    return -0.5 * p.delta * std::exp(-lambda_exponent(p)) *
           specfun::laguerre(block.n0, x0) * specfun::laguerre(block.n1, x1);
}

BlockSpectrum block_spectrum(const ModelParams& p, BlockIndex block) {
    BlockSpectrum s;
    s.block = block;
    s.cal_n = p.omega0() * block.n0 + p.omega1() * block.n1;
    s.gamma_plus = gamma_plus(p);
    s.gamma_minus = gamma_minus(p);
    s.lambda_n = lambda_of_block(p, block);
    s.chi_n = std::hypot(2.0 * s.lambda_n, s.gamma_minus);

    const double l2 = p.lambda * p.lambda;
    s.energy[0] = s.cal_n - 2.0 * l2 / p.omega0();
    s.energy[1] = s.cal_n - 2.0 * l2 / p.omega1();
    s.energy[2] = s.cal_n - s.gamma_plus + s.chi_n;
    s.energy[3] = s.cal_n - s.gamma_plus - s.chi_n;

    const double scale = std::max({std::abs(s.gamma_minus), 0.5 * p.delta, 1e-300});
    s.degenerate = std::abs(s.lambda_n) < 1e-12 * scale;
    const double sign = (s.lambda_n < 0.0) ? -1.0 : 1.0;   // +1 at Lambda = 0

    double pp, qq;   // (chi - Gamma-)/chi and (chi + Gamma-)/chi
    if (s.chi_n > 0.0) {
        pp = (s.chi_n - s.gamma_minus) / s.chi_n;
        qq = (s.chi_n + s.gamma_minus) / s.chi_n;
    } else {
        // Lambda = Gamma- = 0: fourfold degenerate block, any orthonormal
        // combination serves.
        pp = 1.0;
        qq = 1.0;
        s.degenerate = true;
    }
    const double half_p = 0.5 * std::sqrt(pp);
    const double half_q = 0.5 * std::sqrt(qq);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

    // rows over (|N0,+2;1,1>, |N0,-2;-1,-1>, |N1,+2;1,-1>, |N1,-2;-1,1>)
    s.mixing[0] = {inv_sqrt2, -inv_sqrt2, 0.0, 0.0};
    s.mixing[1] = {0.0, 0.0, inv_sqrt2, -inv_sqrt2};
    s.mixing[2] = {half_p, half_p, sign * half_q, sign * half_q};
    s.mixing[3] = {half_q, half_q, -sign * half_p, -sign * half_p};

    const int base = ((block.n0 + block.n1) % 2 == 0) ? 1 : -1;
    s.parity = {base, base, -base, -base};
    return s;
}

std::vector<double> degeneracy_couplings(const ModelParams& p, BlockIndex block,
                                         double lambda_max) {
    if (!(lambda_max > 0.0))
        throw std::invalid_argument("degeneracy_couplings: lambda_max must be positive");
    std::vector<double> out;
    const int degrees[2] = {block.n0, block.n1};
    for (int mode = 0; mode < 2; ++mode) {
        const int deg = degrees[mode];
        if (deg < 1) continue;
        const double omega_j = p.omega_mode(mode);
        for (double x : specfun::laguerre_zeros(deg)) {
            const double lam = omega_j * std::sqrt(0.5 * x);
            if (lam > 0.0 && lam <= lambda_max) out.push_back(lam);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-12; }),
              out.end());
    return out;
}

std::vector<SweepRow> energy_sweep(const ModelParams& p, BlockIndex block,
                                   const std::vector<double>& lambda_grid) {
    std::vector<SweepRow> rows;
    rows.reserve(lambda_grid.size());
    ModelParams q = p;
    for (double lam : lambda_grid) {
        q.lambda = lam;
        q.validate();
        const BlockSpectrum s = block_spectrum(q, block);
        rows.push_back({lam, s.energy, s.parity});
    }
    return rows;
}

} // namespace cavitynoon
