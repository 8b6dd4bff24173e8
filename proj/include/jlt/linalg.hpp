#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace jlt {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// det(A) by partially pivoted LU.
cplx determinant(const CMatrix& a);

/**
 * Eigenvalues of a small dense complex matrix: Householder reduction to
 * Hessenberg form followed by single-shift QR with Wilkinson shifts.
 * Throws NumericError when an eigenvalue fails to converge in 30·n sweeps.
 */
std::vector<cplx> eigenvalues(const CMatrix& a);

/**
 * Singular values by one-sided (Hestenes) Jacobi, sorted descending.
 * Columns are rotated pairwise until |a_i^H a_j| <= tol·|a_i||a_j|.
 */
std::vector<double> singular_values(const CMatrix& a, double tol = 1e-13, int max_sweeps = 60);

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi, ascending.
std::vector<double> symmetric_eigenvalues(Eigen::MatrixXd a);

/// Tridiagonal matrix: sub[i] = T(i+1,i), super[i] = T(i,i+1).
struct Tridiagonal {
    std::vector<cplx> diag;
    std::vector<cplx> sub;
    std::vector<cplx> super;

    std::size_t size() const { return diag.size(); }
    CMatrix dense() const;
};

/**
 * Eigenvalues of a complex tridiagonal matrix in O(n^2).
 *
 * The matrix is first made complex symmetric by a diagonal similarity
 * (off-diagonal pairs (l, u) become sqrt(l·u); a vanishing product splits the
 * matrix into blocks with the same eigenvalues), then reduced by implicit QL
 * sweeps with complex orthogonal rotations and Wilkinson shifts.
 * Throws NumericError after 50·n sweeps in total.
 */
std::vector<cplx> tridiagonal_eigenvalues(const Tridiagonal& t);

/**
 * Solves (T - shift) x = rhs by Gaussian elimination with partial pivoting
 * in O(n). An exactly zero pivot is replaced by eps·||T||, which is what
 * inverse iteration at a computed eigenvalue needs.
 */
std::vector<cplx> tridiagonal_solve(const Tridiagonal& t, cplx shift, std::vector<cplx> rhs);

/// Right eigenvector for a computed eigenvalue by two steps of inverse iteration at a slightly offset shift; unit 2-norm.
std::vector<cplx> tridiagonal_eigenvector(const Tridiagonal& t, cplx lambda);

}  // namespace jlt
