#pragma once

#include <functional>
#include <vector>

#include "jlt/errors.hpp"
#include "jlt/finite_gap_set.hpp"

namespace jlt {

/// Exponents (p′, q′, r′) of the zero-sum bound on Ω = C̄ ∖ E.
template <class T>
struct ExponentTripleT {
    T p;
    T q;
    T r;
    bool operator==(const ExponentTripleT&) const = default;
};
using ExponentTriple = ExponentTripleT<double>;

/**
 * p′ = p + 1 + ε, q′ = ½[(p + 2q − 1 + ε)₊ − p′], r′ = (p + q + r − ε)₊ − p′ − q′.
 * Generic in T so that the identities can be checked in exact rational arithmetic.
 */
template <class T>
ExponentTripleT<T> exponent_triple(const T& p, const T& q, const T& r, const T& eps) {
    const T zero(0);
    if (p < zero || q < zero || r < zero) throw UsageError("exponent_triple needs p, q, r >= 0");
    if (!(eps > zero)) throw UsageError("exponent_triple needs eps > 0");
    auto plus = [&](const T& x) { return x < zero ? zero : x; };
    const T pp = p + T(1) + eps;
    const T qq = (plus(p + T(2) * q - T(1) + eps) - pp) / T(2);
    const T rr = plus(p + q + r - eps) - pp - qq;
    return {pp, qq, rr};
}

/// Growth data of the disk zero-sum bound: log|h(z)| <= K|z|^γ / ((1−|z|)^α dist(z, S)^β).
struct DiskEnvelope {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double eps = 0.0;
    std::vector<cplx> marked;  ///< S, finite set on the unit circle
};

/// Σ (1−|z|)^{α+1+ε} dist(z,S)^{(β−1+ε)₊} / |z|^{(γ−ε)₊} over zeros listed with multiplicity.
double disk_zero_sum(const std::vector<cplx>& zeros, const DiskEnvelope& env);

/// One summand of omega_zero_sum: dist(z,E)^{p′} dist(z,∂E)^{q′} (1+|z|)^{r′}.
double omega_summand(cplx z, const FiniteGapSet& e, const ExponentTriple& t);

/// Σ omega_summand over zeros off E, with (p′, q′, r′) = exponent_triple(p, q, r, eps).
double omega_zero_sum(const std::vector<cplx>& zeros, const FiniteGapSet& e, double p, double q, double r,
                      double eps);

/**
 * Finite Blaschke product normalized at the origin, h(z) = B(z)/B(0) with
 * B(z) = Π (z − a)/(1 − ā z), so |h(0)| = 1 and h has exactly the zeros a.
 */
class NormalizedBlaschke {
  public:
    /// Zeros must lie in 0 < |a| < 1; h(0) = 0 cannot be normalized and is rejected.
    explicit NormalizedBlaschke(std::vector<cplx> zeros);

    cplx operator()(cplx z) const;
    double log_abs(cplx z) const;
    const std::vector<cplx>& zeros() const { return zeros_; }

  private:
    std::vector<cplx> zeros_;
    double log_abs_b0_ = 0.0;
};

/**
 * Estimate of the smallest K in the disk growth hypothesis: the sup of
 * log|h(z)| (1−|z|)^α dist(z,S)^β / |z|^γ over a polar grid of
 * n_radii × n_angles points with radii (i + ½)/n_radii.
 */
double disk_growth_constant(const std::function<double(cplx)>& log_abs_h, const DiskEnvelope& env,
                            int n_radii = 100, int n_angles = 100);

}  // namespace jlt
