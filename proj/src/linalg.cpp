#include "cavitynoon/linalg.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cavitynoon::linalg {

Mat4 matmul(const Mat4& x, const Mat4& y) {
    Mat4 r;
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) {
            const cplx xik = x(i, k);
            if (xik == cplx{}) continue;
            for (int j = 0; j < 4; ++j) r(i, j) += xik * y(k, j);
        }
    return r;
}

Mat4 adjoint(const Mat4& x) {
    Mat4 r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r(i, j) = std::conj(x(j, i));
    return r;
}

cplx trace(const Mat4& x) { return x(0, 0) + x(1, 1) + x(2, 2) + x(3, 3); }

double max_abs(const Mat4& x) {
    double m = 0.0;
    for (const auto& v : x.a) m = std::max(m, std::abs(v));
    return m;
}

// One cyclic sweep of complex Jacobi rotations.  For the (p,q) plane with
// off-diagonal b = |b| e^{i phi}, the unitary
//   U = [[c, -s e^{i phi}], [s e^{-i phi}, c]]
// annihilates the (p,q) element when t = s/c solves
// t^2 - 2 tau t - 1 = 0, tau = (a_qq - a_pp)/(2|b|).
HermitianEigen4 hermitian_eigen(const Mat4& m) {
    Mat4 a = m;
    // enforce exact Hermiticity of the working copy
    for (int i = 0; i < 4; ++i) {
        a(i, i) = cplx{a(i, i).real(), 0.0};
        for (int j = i + 1; j < 4; ++j) {
            const cplx avg = 0.5 * (a(i, j) + std::conj(a(j, i)));
            a(i, j) = avg;
            a(j, i) = std::conj(avg);
        }
    }
    Mat4 v;
    for (int i = 0; i < 4; ++i) v(i, i) = 1.0;

    const double scale = std::max(max_abs(a), 1e-300);
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < 4; ++p)
            for (int q = p + 1; q < 4; ++q) off += std::norm(a(p, q));
        if (std::sqrt(off) <= 1e-15 * scale) break;

        for (int p = 0; p < 4; ++p)
            for (int q = p + 1; q < 4; ++q) {
                const cplx b = a(p, q);
                const double babs = std::abs(b);
                if (babs <= 1e-18 * scale) {
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;
                    continue;
                }
                const cplx phase = b / babs;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                // small root of t^2 - 2 tau t - 1 = 0
                const double tau = (aqq - app) / (2.0 * babs);
                const double t = (tau >= 0.0 ? -1.0 : 1.0) / (std::abs(tau) + std::hypot(tau, 1.0));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cplx sp = s * phase;             // s e^{i phi}

                // column update A <- A U
                for (int r = 0; r < 4; ++r) {
                    const cplx arp = a(r, p), arq = a(r, q);
                    a(r, p) = c * arp + std::conj(sp) * arq;
                    a(r, q) = -sp * arp + c * arq;
                }
                // row update A <- U^dagger A
                for (int r = 0; r < 4; ++r) {
                    const cplx apr = a(p, r), aqr = a(q, r);
                    a(p, r) = c * apr + sp * aqr;
                    a(q, r) = -std::conj(sp) * apr + c * aqr;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = cplx{a(p, p).real(), 0.0};
                a(q, q) = cplx{a(q, q).real(), 0.0};

                for (int r = 0; r < 4; ++r) {
                    const cplx vrp = v(r, p), vrq = v(r, q);
                    v(r, p) = c * vrp + std::conj(sp) * vrq;
                    v(r, q) = -sp * vrp + c * vrq;
                }
            }
    }

    HermitianEigen4 out;
    std::array<int, 4> order{0, 1, 2, 3};
    std::array<double, 4> diag{a(0, 0).real(), a(1, 1).real(), a(2, 2).real(), a(3, 3).real()};
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return diag[i] < diag[j]; });
    for (int k = 0; k < 4; ++k) {
        out.values[k] = diag[order[k]];
        for (int i = 0; i < 4; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

Mat4 sqrt_psd(const Mat4& m) {
    const HermitianEigen4 eig = hermitian_eigen(m);
    Mat4 r;
    for (int k = 0; k < 4; ++k) {
        const double lam = std::max(eig.values[k], 0.0);
        const double root = std::sqrt(lam);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                r(i, j) += root * eig.vectors(i, k) * std::conj(eig.vectors(j, k));
    }
    return r;
}

namespace {

// Householder reduction of a real symmetric matrix to tridiagonal form,
// accumulating the orthogonal transform in place (EISPACK tred2 lineage).
void tridiagonalize(int n, std::vector<double>& a, std::vector<double>& d,
                    std::vector<double>& e) {
    const auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };
    for (int i = n - 1; i >= 1; --i) {
        const int l = i - 1;
        double h = 0.0;
        if (l > 0) {
            double scale = 0.0;
            for (int k = 0; k <= l; ++k) scale += std::abs(at(i, k));
            if (scale == 0.0) {
                e[i] = at(i, l);
            } else {
                for (int k = 0; k <= l; ++k) {
                    at(i, k) /= scale;
                    h += at(i, k) * at(i, k);
                }
                double f = at(i, l);
                const double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                at(i, l) = f - g;
                f = 0.0;
                for (int j = 0; j <= l; ++j) {
                    at(j, i) = at(i, j) / h;
                    double gg = 0.0;
                    for (int k = 0; k <= j; ++k) gg += at(j, k) * at(i, k);
                    for (int k = j + 1; k <= l; ++k) gg += at(k, j) * at(i, k);
                    e[j] = gg / h;
                    f += e[j] * at(i, j);
                }
                const double hh = f / (h + h);
                for (int j = 0; j <= l; ++j) {
                    f = at(i, j);
                    const double gg = e[j] - hh * f;
                    e[j] = gg;
                    for (int k = 0; k <= j; ++k)
                        at(j, k) -= f * e[k] + gg * at(i, k);
                }
            }
        } else {
            e[i] = at(i, l);
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for (int i = 0; i < n; ++i) {
        const int l = i - 1;
        if (d[i] != 0.0) {
            for (int j = 0; j <= l; ++j) {
                double g = 0.0;
                for (int k = 0; k <= l; ++k) g += at(i, k) * at(k, j);
                for (int k = 0; k <= l; ++k) at(k, j) -= g * at(k, i);
            }
        }
        d[i] = at(i, i);
        at(i, i) = 1.0;
        for (int j = 0; j <= l; ++j) {
            at(j, i) = 0.0;
            at(i, j) = 0.0;
        }
    }
}

// Implicit-shift QL on the tridiagonal (d, e) with eigenvector accumulation
// into z (columns).
void ql_implicit(int n, std::vector<double>& d, std::vector<double>& e,
                 std::vector<double>& z) {
    const auto zt = [&](int i, int j) -> double& { return z[static_cast<std::size_t>(i) * n + j]; };
    for (int i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m = l;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= DBL_EPSILON * dd) break;
            }
            if (m != l) {
                if (iter++ == 50)
                    throw std::runtime_error("symmetric_eigen: QL failed to converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i = m - 1;
                for (; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    for (int k = 0; k < n; ++k) {
                        f = zt(k, i + 1);
                        zt(k, i + 1) = s * zt(k, i) + c * f;
                        zt(k, i) = c * zt(k, i) - s * f;
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

} // namespace

void symmetric_eigen(int n, const std::vector<double>& matrix,
                     std::vector<double>& values, std::vector<double>& vectors) {
    if (n <= 0 || matrix.size() != static_cast<std::size_t>(n) * n)
        throw std::invalid_argument("symmetric_eigen: bad dimensions");
    vectors = matrix;
    values.assign(n, 0.0);
    std::vector<double> e(n, 0.0);
    if (n == 1) {
        values[0] = matrix[0];
        vectors[0] = 1.0;
        return;
    }
    tridiagonalize(n, vectors, values, e);
    ql_implicit(n, values, e, vectors);

    // ascending eigenvalues, columns permuted alongside
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return values[i] < values[j]; });
    std::vector<double> dv(values);
    std::vector<double> zv(vectors);
    for (int k = 0; k < n; ++k) {
        values[k] = dv[order[k]];
        for (int i = 0; i < n; ++i)
            vectors[static_cast<std::size_t>(i) * n + k] = zv[static_cast<std::size_t>(i) * n + order[k]];
    }
}

} // namespace cavitynoon::linalg
