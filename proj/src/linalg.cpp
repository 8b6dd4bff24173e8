#include "jlt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "jlt/errors.hpp"

namespace jlt {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Givens {
    double c;
    cplx s;
};

// G = [[c, s], [-conj(s), c]] maps (x, y) to (r·x/|x|, 0).
Givens make_givens(cplx x, cplx y) {
    const double ax = std::abs(x);
    const double ay = std::abs(y);
    if (ay == 0.0) return {1.0, 0.0};
    if (ax == 0.0) return {0.0, 1.0};
    const double r = std::hypot(ax, ay);
    return {ax / r, (x / ax) * std::conj(y) / r};
}

void reduce_to_hessenberg(CMatrix& h) {
    const Eigen::Index n = h.rows();
    for (Eigen::Index k = 0; k + 2 < n; ++k) {
        CVector v = h.block(k + 1, k, n - k - 1, 1);
        const double alpha_norm = v.norm();
        if (alpha_norm == 0.0) continue;
        const cplx x0 = v(0);
        const cplx phase = std::abs(x0) == 0.0 ? cplx(1.0) : x0 / std::abs(x0);
        v(0) += phase * alpha_norm;
        const double vn = v.norm();
        if (vn == 0.0) continue;
        v /= vn;
        // H <- (I - 2vv^H) H (I - 2vv^H)
        auto rows = h.block(k + 1, 0, n - k - 1, n);
        rows -= 2.0 * v * (v.adjoint() * rows);
        auto cols = h.block(0, k + 1, n, n - k - 1);
        cols -= 2.0 * (cols * v) * v.adjoint();
        for (Eigen::Index i = k + 2; i < n; ++i) h(i, k) = 0.0;
    }
}

// Eigenvalue of [[a, b], [c, d]] closer to d.
cplx wilkinson_shift(cplx a, cplx b, cplx c, cplx d) {
    const cplx tr = a + d;
    const cplx disc = std::sqrt((a - d) * (a - d) + 4.0 * b * c);
    const cplx l1 = 0.5 * (tr + disc);
    const cplx l2 = 0.5 * (tr - disc);
    return std::abs(l1 - d) < std::abs(l2 - d) ? l1 : l2;
}

}  // namespace

cplx determinant(const CMatrix& a) {
    if (a.rows() == 0) return 1.0;
    return a.partialPivLu().determinant();
}

std::vector<cplx> eigenvalues(const CMatrix& a) {
    if (a.rows() != a.cols()) throw UsageError("eigenvalues: matrix must be square");
    const Eigen::Index n = a.rows();
    std::vector<cplx> out;
    out.reserve(static_cast<std::size_t>(n));
    if (n == 0) return out;
    if (!a.allFinite()) throw NumericError("eigenvalues: non-finite matrix entry");

    CMatrix h = a;
    reduce_to_hessenberg(h);

    Eigen::Index hi = n - 1;
    int iter = 0;
    std::vector<Givens> rot(static_cast<std::size_t>(n));
    while (hi >= 0) {
        if (hi == 0) {
            out.push_back(h(0, 0));
            break;
        }
        Eigen::Index lo = hi;
        while (lo > 0) {
            const double scale = std::abs(h(lo - 1, lo - 1)) + std::abs(h(lo, lo));
            if (std::abs(h(lo, lo - 1)) <= kEps * (scale == 0.0 ? 1.0 : scale)) {
                h(lo, lo - 1) = 0.0;
                break;
            }
            --lo;
        }
        if (lo == hi) {
            out.push_back(h(hi, hi));
            --hi;
            iter = 0;
            continue;
        }
        if (++iter > 30 * static_cast<int>(n))
            throw NumericError(fmt::format("Hessenberg QR did not converge (n = {})", n));

        cplx shift;
        if (iter % 11 == 0) {
            shift = h(hi, hi) + 0.75 * std::abs(h(hi, hi - 1)) * cplx(1.0, 1.0);
        } else {
            shift = wilkinson_shift(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
        }

        for (Eigen::Index k = lo; k <= hi; ++k) h(k, k) -= shift;
        for (Eigen::Index k = lo; k < hi; ++k) {
            const Givens g = make_givens(h(k, k), h(k + 1, k));
            rot[static_cast<std::size_t>(k)] = g;
            for (Eigen::Index j = k; j <= hi; ++j) {
                const cplx x = h(k, j);
                const cplx y = h(k + 1, j);
                h(k, j) = g.c * x + g.s * y;
                h(k + 1, j) = -std::conj(g.s) * x + g.c * y;
            }
        }
        for (Eigen::Index k = lo; k < hi; ++k) {
            const Givens g = rot[static_cast<std::size_t>(k)];
            const Eigen::Index last = std::min(k + 2, hi);
            for (Eigen::Index i = lo; i <= last; ++i) {
                const cplx x = h(i, k);
                const cplx y = h(i, k + 1);
                h(i, k) = g.c * x + std::conj(g.s) * y;
                h(i, k + 1) = -g.s * x + g.c * y;
            }
        }
        for (Eigen::Index k = lo; k <= hi; ++k) h(k, k) += shift;
    }
    return out;
}

std::vector<double> singular_values(const CMatrix& a, double tol, int max_sweeps) {
    CMatrix u = a;
    if (u.rows() < u.cols()) u = a.adjoint();
    const Eigen::Index n = u.cols();
    if (!u.allFinite()) throw NumericError("singular values: non-finite matrix entry");

    bool converged = n < 2;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        converged = true;
        for (Eigen::Index i = 0; i + 1 < n; ++i) {
            for (Eigen::Index j = i + 1; j < n; ++j) {
                const double alpha = u.col(i).squaredNorm();
                const double beta = u.col(j).squaredNorm();
                const cplx gamma = u.col(i).dot(u.col(j));  // a_i^H a_j
                const double g = std::abs(gamma);
                if (g == 0.0 || g <= tol * std::sqrt(alpha * beta)) continue;
                converged = false;
                const cplx phase = gamma / g;
                const double zeta = (beta - alpha) / (2.0 * g);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                // Rotate (x, e^{-iφ} y) by a real Jacobi rotation, restore the phase on y.
                CVector x = u.col(i);
                CVector y = u.col(j) * std::conj(phase);
                u.col(i) = c * x - s * y;
                u.col(j) = (s * x + c * y) * phase;
            }
        }
    }
    if (!converged)
        throw NumericError(fmt::format("one-sided Jacobi did not converge in {} sweeps", max_sweeps));

    std::vector<double> sv(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) sv[static_cast<std::size_t>(k)] = u.col(k).norm();
    std::sort(sv.begin(), sv.end(), std::greater<>());
    return sv;
}

std::vector<double> symmetric_eigenvalues(Eigen::MatrixXd a) {
    const Eigen::Index n = a.rows();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        if (off <= kEps * kEps * std::max(1.0, a.squaredNorm())) break;
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                if (a(p, q) == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) ev[static_cast<std::size_t>(k)] = a(k, k);
    std::sort(ev.begin(), ev.end());
    return ev;
}

CMatrix Tridiagonal::dense() const {
    const auto n = static_cast<Eigen::Index>(diag.size());
    CMatrix m = CMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        m(i, i) = diag[static_cast<std::size_t>(i)];
        if (i + 1 < n) {
            m(i + 1, i) = sub[static_cast<std::size_t>(i)];
            m(i, i + 1) = super[static_cast<std::size_t>(i)];
        }
    }
    return m;
}

std::vector<cplx> tridiagonal_eigenvalues(const Tridiagonal& t) {
    const std::size_t n = t.size();
    if (n == 0) return {};
    if (t.sub.size() + 1 != n || t.super.size() + 1 != n)
        throw UsageError("tridiagonal: off-diagonal lengths must be n - 1");

    std::vector<cplx> d = t.diag;
    std::vector<cplx> e(n, 0.0);  // e[i] couples i and i + 1
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const cplx prod = t.sub[i] * t.super[i];
        e[i] = prod == cplx(0.0) ? cplx(0.0) : std::sqrt(prod);
    }
    for (const auto& x : d)
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
            throw NumericError("tridiagonal: non-finite entry");

    const long budget = 50 * static_cast<long>(n);
    long total = 0;
    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m = l;
        for (;;) {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= kEps * dd) break;
            }
            if (m == l) break;
            ++iter;
            if (++total > budget)
                throw NumericError(fmt::format("tridiagonal QL did not converge (n = {})", n));

            cplx g;
            if (iter % 10 == 0) {
                // exceptional shift
                g = d[m] - d[l] + 0.75 * std::abs(e[l]) * cplx(1.0, 0.5);
            } else {
                g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                const cplx r = std::sqrt(g * g + 1.0);
                const cplx denom = std::abs(g + r) >= std::abs(g - r) ? g + r : g - r;
                g = d[m] - d[l] + e[l] / denom;
            }
            cplx s = 1.0, c = 1.0, p = 0.0;
            bool early = false;
            for (std::size_t ii = m; ii-- > l;) {
                const cplx f = s * e[ii];
                const cplx b = c * e[ii];
                const cplx r = std::sqrt(f * f + g * g);
                e[ii + 1] = r;
                if (std::abs(r) <= std::numeric_limits<double>::min() ||
                    std::abs(r) < 1e3 * kEps * (std::abs(f) + std::abs(g))) {
                    if (std::abs(f) + std::abs(g) == 0.0 ||
                        std::abs(r) <= std::numeric_limits<double>::min()) {
                        d[ii + 1] -= p;
                        e[m] = 0.0;
                        early = true;
                        break;
                    }
                    throw NumericError("tridiagonal QL: complex rotation breakdown");
                }
                s = f / r;
                c = g / r;
                g = d[ii + 1] - p;
                const cplx rr = (d[ii] - g) * s + 2.0 * c * b;
                p = s * rr;
                d[ii + 1] = g + p;
                g = c * rr - b;
            }
            if (early) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    for (const auto& x : d)
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
            throw NumericError("tridiagonal QL produced a non-finite eigenvalue");
    return d;
}

std::vector<cplx> tridiagonal_solve(const Tridiagonal& t, cplx shift, std::vector<cplx> b) {
    const std::size_t n = t.size();
    if (b.size() != n) throw UsageError("tridiagonal solve: right-hand side has the wrong length");
    if (n == 0) return b;
    std::vector<cplx> d(t.diag), dl(t.sub), du(t.super);
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        d[i] -= shift;
        norm = std::max(norm, std::abs(d[i]));
    }
    for (std::size_t i = 0; i + 1 < n; ++i) norm = std::max({norm, std::abs(dl[i]), std::abs(du[i])});
    const double tiny = std::numeric_limits<double>::epsilon() * std::max(norm, 1.0);
    auto guard = [tiny](cplx& x) {
        if (x == cplx(0.0)) x = tiny;
    };

    // dl[i] is reused for the second superdiagonal created by row swaps
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(d[i]) >= std::abs(dl[i])) {
            guard(d[i]);
            const cplx fact = dl[i] / d[i];
            d[i + 1] -= fact * du[i];
            b[i + 1] -= fact * b[i];
            dl[i] = 0.0;
        } else {
            const cplx fact = d[i] / dl[i];
            d[i] = dl[i];
            const cplx temp = d[i + 1];
            d[i + 1] = du[i] - fact * temp;
            if (i + 2 < n) {
                dl[i] = du[i + 1];
                du[i + 1] = -fact * dl[i];
            } else {
                dl[i] = 0.0;
            }
            du[i] = temp;
            const cplx bi = b[i];
            b[i] = b[i + 1];
            b[i + 1] = bi - fact * b[i + 1];
        }
    }
    guard(d[n - 1]);
    b[n - 1] /= d[n - 1];
    if (n > 1) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    for (std::size_t i = n - 2; i-- > 0;) b[i] = (b[i] - du[i] * b[i + 1] - dl[i] * b[i + 2]) / d[i];
    return b;
}

std::vector<cplx> tridiagonal_eigenvector(const Tridiagonal& t, cplx lambda) {
    // an exact eigenvalue makes the elimination overflow; stay 1e-10 away
    const cplx shift = lambda + 1e-10 * (1.0 + std::abs(lambda)) * cplx(0.6, 0.8);
    std::vector<cplx> x(t.size(), 1.0);
    for (int it = 0; it < 2; ++it) {
        x = tridiagonal_solve(t, shift, std::move(x));
        double norm = 0.0;
        for (cplx v : x) norm += std::norm(v);
        norm = std::sqrt(norm);
        if (!(norm > 0.0) || !std::isfinite(norm)) throw NumericError("inverse iteration broke down");
        for (cplx& v : x) v /= norm;
    }
    return x;
}

}  // namespace jlt
