#ifndef CAVITYNOON_LINALG_HPP
#define CAVITYNOON_LINALG_HPP

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

namespace cavitynoon::linalg {

using cplx = std::complex<double>;

/// Row-major 4x4 complex matrix, the workhorse for two-qubit operators.
struct Mat4 {
    std::array<cplx, 16> a{};
    cplx& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * 4 + j]; }
    const cplx& operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * 4 + j]; }
};

Mat4 matmul(const Mat4& x, const Mat4& y);
Mat4 adjoint(const Mat4& x);
cplx trace(const Mat4& x);
double max_abs(const Mat4& x);

/// Eigensystem of a Hermitian 4x4 matrix via cyclic complex Jacobi
/// rotations.  Eigenvalues ascending; `vectors` holds the eigenvectors as
/// columns (vectors(i,k) = component i of eigenvector k).  Deterministic.
struct HermitianEigen4 {
    std::array<double, 4> values{};
    Mat4 vectors;
};
HermitianEigen4 hermitian_eigen(const Mat4& m);

/// Principal square root of a positive semidefinite Hermitian matrix;
/// eigenvalues below 0 are clamped to 0 before the root.
Mat4 sqrt_psd(const Mat4& m);

/// Full eigensystem of a dense real symmetric matrix (row-major, n x n):
/// Householder reduction to tridiagonal form followed by implicit-shift QL
/// with accumulated transforms.  Eigenvalues ascending; on return `vectors`
/// (n x n, row-major) holds eigenvector k in column k.  Single-threaded.
void symmetric_eigen(int n, const std::vector<double>& matrix,
                     std::vector<double>& values, std::vector<double>& vectors);

} // namespace cavitynoon::linalg

#endif
