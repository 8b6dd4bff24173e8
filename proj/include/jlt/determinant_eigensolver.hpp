#pragma once

#include <functional>
#include <string>
#include <vector>

#include "jlt/linalg.hpp"
#include "jlt/periodic_jacobi.hpp"
#include "jlt/perturbation.hpp"

namespace jlt {

/// Closed axis-parallel rectangle [lo.re, hi.re] × [lo.im, hi.im].
struct ContourBox {
    cplx lo;
    cplx hi;
    int samples = 16;  ///< initial samples per side before adaptive refinement

    double width() const { return hi.real() - lo.real(); }
    double height() const { return hi.imag() - lo.imag(); }
    double diameter() const { return std::abs(hi - lo); }
    cplx center() const { return 0.5 * (lo + hi); }
    bool contains(cplx z) const {
        return z.real() >= lo.real() && z.real() <= hi.real() && z.imag() >= lo.imag() &&
               z.imag() <= hi.imag();
    }
};

enum class Method { determinant, truncation };
std::string to_string(Method m);

struct EigenvalueRecord {
    cplx z;
    int multiplicity = 1;
    Method method = Method::determinant;
    /// |f(z)| for the determinant method; distance moved under truncation doubling otherwise.
    double residual = 0.0;
};

/// Orders by (Re z, Im z).
void sort_records(std::vector<EigenvalueRecord>& records);

/**
 * det_m(I + A) = Π_j (1 + λ_j) exp(Σ_{k=1}^{m-1} (-λ_j)^k / k).
 * m = 1 is the ordinary determinant (LU); m >= 2 uses the dense QR eigenvalues.
 */
cplx regularized_det(const CMatrix& a, int m);

/**
 * f(z) = det_m(I + K(z)) with K(z) = [D^{1/2} (J' - z)^{-1} D^{1/2}] B over
 * the support of D. Its zeros off E are the discrete eigenvalues of
 * J' + δJ, with matching algebraic multiplicity. The factorization is done
 * once at construction.
 */
class PerturbationDeterminant {
  public:
    PerturbationDeterminant(PeriodicJacobi j, const Perturbation& dj, int m = 1);

    cplx operator()(cplx z) const;

    const FiniteGapSet& set() const { return e_; }
    std::size_t support_size() const { return factored_.support.size(); }

  private:
    PeriodicJacobi j_;
    FiniteGapSet e_;
    FactoredPerturbation factored_;
    CMatrix b_;
    int m_;
};

cplx perturbation_determinant(const PeriodicJacobi& j, const Perturbation& dj, cplx z, int m = 1);

/**
 * Winding number of f around the box boundary (counterclockwise), by
 * continuous argument tracking: each side starts with `box.samples` points
 * and segments are bisected until consecutive phase steps are below π/4.
 * Near each real branch point of f (band edges for the perturbation
 * determinant) segments are additionally kept shorter than half their
 * distance to it. A zero on the boundary shows up as a phase jump that
 * survives bisection down to rounding level; that, or an exact zero, throws
 * ContourError.
 */
int winding_number(const std::function<cplx(cplx)>& f, const ContourBox& box,
                   const std::vector<double>& branch_points = {});

struct EigenSearchOptions {
    double tol = 1e-10;          ///< target accuracy; also the radius of the unexplored tube around E
    int samples = 16;            ///< initial samples per box side
    double cluster_diameter = 1e-6;  ///< relative size below which a winding >= 2 box is one cluster
};

/**
 * Zeros of the perturbation determinant inside `region`, which must not
 * meet E. Boxes with nonzero winding are subdivided; a winding-one box is
 * resolved by a secant iteration that must converge inside the box, and
 * windings >= 2 shrink until the box is a cluster, then modified Newton
 * with the winding as multiplicity.
 */
std::vector<EigenvalueRecord> find_eigenvalues(const PeriodicJacobi& j, const Perturbation& dj,
                                               const ContourBox& region,
                                               const EigenSearchOptions& opts = {});

/**
 * Boxes covering {|Re z - E| <= r, |Im z| <= r} minus a tube of radius tol
 * around E, with r = max(2, 2 · max_line_sum(δJ)). Bands get an upper and a
 * lower box separated by the tube; gaps and the two outer pieces get one
 * full-height box each.
 */
struct SearchRegion {
    std::vector<ContourBox> boxes;
    double tube_radius = 0.0;
    double reach = 0.0;
};
SearchRegion default_region(const FiniteGapSet& e, const Perturbation& dj, double tol, int samples = 16);

struct EigenSearchResult {
    std::vector<EigenvalueRecord> eigenvalues;
    double tube_radius = 0.0;  ///< eigenvalues closer than this to E are not searched for
};

/// find_eigenvalues over the default region.
EigenSearchResult find_all_eigenvalues(const PeriodicJacobi& j, const Perturbation& dj,
                                       const EigenSearchOptions& opts = {});

/**
 * Eigenvalues of the (2M+1)-site truncation of J' + δJ on [-M, M] that lie
 * farther than filter_dist from E, move by less than 1e-6 when the
 * truncation is enlarged to 2M + s sites per side (s in [0, q) shifts the
 * cut points within the period), and whose eigenvector carries less than
 * 1e-4 of its mass on |n| > M/2. The last condition removes boundary states,
 * which can persist under enlargement (the odd-length a = (1, 2) chain has
 * a zero mode at every size). Multiplicity counts eigenvalues clustered
 * within 10 · tol.
 */
std::vector<EigenvalueRecord> truncated_eigenvalues(const PeriodicJacobi& j, const Perturbation& dj,
                                                    long m, double filter_dist, double tol = 1e-7);

}  // namespace jlt
