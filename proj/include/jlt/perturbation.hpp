#pragma once

#include <vector>

#include "jlt/band_quadrature.hpp"
#include "jlt/linalg.hpp"
#include "jlt/periodic_jacobi.hpp"

namespace jlt {

/**
 * Finitely supported complex tridiagonal perturbation δJ on the window
 * [n0, n1]:
 *
 *     δJ(n+1, n) = δa_n,   δJ(n, n) = δb_n,   δJ(n, n+1) = δc_n.
 *
 * Entries outside the window are zero. The rows and columns touched by δJ are
 * [n0, n1 + 1].
 */
class Perturbation {
  public:
    Perturbation() = default;
    Perturbation(long n0, std::vector<cplx> da, std::vector<cplx> db, std::vector<cplx> dc);

    /// δb_n0 = value, everything else zero.
    static Perturbation diagonal_site(long n, cplx value);

    long n0() const { return n0_; }
    long n1() const { return n0_ + static_cast<long>(db_.size()) - 1; }
    std::size_t width() const { return db_.size(); }

    cplx a(long n) const { return at(da_, n); }
    cplx b(long n) const { return at(db_, n); }
    cplx c(long n) const { return at(dc_, n); }
    const std::vector<cplx>& da() const { return da_; }
    const std::vector<cplx>& db() const { return db_; }
    const std::vector<cplx>& dc() const { return dc_; }

    bool is_zero() const;
    /// Real δb and δa = δc real: J' + δJ stays selfadjoint.
    bool is_selfadjoint() const;
    /// Entrywise complex conjugate.
    Perturbation conjugate() const;
    Perturbation scaled(double t) const;
    /// max over rows and columns of the absolute sums; bounds ||δJ||.
    double max_line_sum() const;
    /// δJ as a dense matrix over rows/columns [n0, n1 + 1].
    CMatrix dense() const;

  private:
    cplx at(const std::vector<cplx>& v, long n) const {
        if (n < n0_ || n > n1()) return 0.0;
        return v[static_cast<std::size_t>(n - n0_)];
    }

    long n0_ = 0;
    std::vector<cplx> da_;
    std::vector<cplx> db_;
    std::vector<cplx> dc_;
};

/// Nonnegative diagonal matrix with finitely many nonzero entries.
struct Diagonal {
    long first = 0;
    std::vector<double> values;

    double operator()(long n) const {
        if (n < first || n >= first + static_cast<long>(values.size())) return 0.0;
        return values[static_cast<std::size_t>(n - first)];
    }
    /// Indices with a strictly positive entry, ascending.
    std::vector<long> support() const;
    /// Σ D_n^p = ||D||_p^p.
    double power_sum(double p) const;
};

/**
 * δJ = D^{1/2} B D^{1/2} with
 *
 *     D_n = max{|δa_{n-1}|, |δa_n|, |δb_n|, |δc_{n-1}|, |δc_n|}
 *
 * and B tridiagonal with entries in the closed unit disk (so ||B|| <= 3).
 * B is stored densely over the index range of `d`.
 */
struct FactoredPerturbation {
    Diagonal d;
    CMatrix b;
    std::vector<long> support;

    /// B restricted to support × support.
    CMatrix b_on_support() const;
};

FactoredPerturbation factor(const Perturbation& dj);

/// Σ_n |δa_n|^p + |δb_n|^p + |δc_n|^p.
double lp_sum(const Perturbation& dj, double p);

/// [D_n^{1/2} G(n, m; z) D_m^{1/2}] over the support of D.
CMatrix sandwich(const PeriodicJacobi& j, const Diagonal& d, cplx z);
CMatrix sandwich(const PeriodicJacobi& j, const Perturbation& dj, cplx z);

/// ℓ^p norm of the singular values; p = +inf gives the largest one.
double schatten_norm(const CMatrix& a, double p);

struct SandwichBound {
    double lhs = 0.0;    ///< ||D^{1/2} (J' - z)^{-1} D^{1/2}||_p^p
    double rhs = 0.0;    ///< sqrt(2) ||D||_p^p sup_n ∫ dρ_n/|t - z| / dist(z, σ)^{p-1}
    double moment = 0.0; ///< the sup over one period
    bool holds = true;
};

/**
 * Both sides of the Schatten bound for the resolvent sandwich. The sup over
 * n ∈ Z is taken over one period of J', where it is attained.
 */
SandwichBound sandwich_bound(const PeriodicJacobi& j, const Diagonal& d, cplx z, double p,
                             const QuadratureOptions& opts = {});

}  // namespace jlt
