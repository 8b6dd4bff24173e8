#pragma once

#include <array>
#include <vector>

#include "jlt/band_quadrature.hpp"
#include "jlt/finite_gap_set.hpp"

namespace jlt {

/**
 * Two-sided selfadjoint Jacobi matrix with q-periodic coefficients:
 *
 *     (J u)_n = a_{n-1} u_{n-1} + b_n u_n + a_n u_{n+1},   a_n > 0,
 *
 * with a_n = a[n mod q], b_n = b[n mod q]. a_n sits at (n+1, n) and (n, n+1).
 */
class PeriodicJacobi {
  public:
    PeriodicJacobi(std::vector<double> a, std::vector<double> b);

    /// a ≡ 1, b ≡ 0.
    static PeriodicJacobi free();

    int period() const { return static_cast<int>(a_.size()); }
    double a(long n) const { return a_[wrap(n)]; }
    double b(long n) const { return b_[wrap(n)]; }
    const std::vector<double>& a_values() const { return a_; }
    const std::vector<double>& b_values() const { return b_; }

    bool operator==(const PeriodicJacobi&) const = default;

  private:
    std::size_t wrap(long n) const {
        const long q = static_cast<long>(a_.size());
        return static_cast<std::size_t>(((n % q) + q) % q);
    }

    std::vector<double> a_;
    std::vector<double> b_;
};

using Mat2 = std::array<std::array<cplx, 2>, 2>;

/// T_{q-1}(z) ⋯ T_0(z) with T_n(z) = [[(z - b_n)/a_n, -a_{n-1}/a_n], [1, 0]].
Mat2 monodromy(const PeriodicJacobi& j, cplx z);
/// Δ(z) = tr of the monodromy; a degree-q polynomial.
cplx discriminant(const PeriodicJacobi& j, cplx z);

/**
 * E = {x real : |Δ(x)| <= 2} as a finite gap set.
 *
 * Band edges are the eigenvalues of the q×q periodic (Δ = 2) and
 * antiperiodic (Δ = -2) restrictions, each polished by bisection on Δ ∓ 2
 * down to adjacent doubles. A double root (closed gap) raises DegeneracyError.
 */
FiniteGapSet spectrum(const PeriodicJacobi& j);

/// Floquet data at a point off the spectrum.
struct FloquetData {
    Mat2 monodromy;
    cplx discriminant;
    cplx rho_plus;   ///< |ρ+| <= 1; solution decaying at +∞
    cplx rho_minus;  ///< 1/ρ+
    std::array<cplx, 2> seed_plus;   ///< (u_0, u_{-1}) of the decaying-at-+∞ solution
    std::array<cplx, 2> seed_minus;  ///< (u_0, u_{-1}) of the decaying-at-−∞ solution
};

FloquetData floquet(const PeriodicJacobi& j, cplx z);

/**
 * Resolvent kernel G(n, m; z) = <δ_n, (J - z)^{-1} δ_m> assembled from the
 * Floquet solutions u± and their Wronskian:
 *
 *     G(n, m) = u−(min(n,m)) u+(max(n,m)) / W,
 *     W = a_n (u−(n) u+(n+1) − u−(n+1) u+(n)).
 *
 * Construction does the per-z work; kernel entries are O(1) afterwards.
 * Real z with |Δ(z)| < 2 raises DomainError, |Δ(z)| = 2 raises DegeneracyError.
 */
class FloquetResolvent {
  public:
    FloquetResolvent(const PeriodicJacobi& j, cplx z);

    cplx operator()(long n, long m) const;
    cplx z() const { return z_; }
    const FloquetData& data() const { return data_; }

  private:
    friend cplx boundary_green(const PeriodicJacobi& j, long n, double t);
    FloquetResolvent(const PeriodicJacobi& j, cplx z, const FloquetData& data);
    void tabulate(const PeriodicJacobi& j);

    long q_;
    cplx z_;
    FloquetData data_;
    // u± at r = -1..q, offset by one
    std::vector<cplx> u_plus_;
    std::vector<cplx> u_minus_;
    cplx wronskian_;
};

/// G(n, m; z) for a single entry.
cplx green(const PeriodicJacobi& j, long n, long m, cplx z);

/**
 * Boundary value G(n, n; t + i0) at an interior band point, evaluated from
 * the Floquet formula at real t. Of the two unimodular multipliers, the
 * branch matching the limit from the upper half-plane is the one giving
 * Im G >= 0.
 */
cplx boundary_green(const PeriodicJacobi& j, long n, double t);

/// ∫ dρ_n(t) / |t - z| = <δ_n, |J - z|^{-1} δ_n>.
double abs_resolvent_moment(const PeriodicJacobi& j, long n, cplx z, const QuadratureOptions& opts = {});

/// (1/π) ∫_E Im G(n, n; t + i0) dt; equals 1 for a probability measure.
double spectral_mass(const PeriodicJacobi& j, long n, const QuadratureOptions& opts = {});

}  // namespace jlt
