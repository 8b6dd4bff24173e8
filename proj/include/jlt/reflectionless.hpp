#pragma once

#include <vector>

#include "jlt/band_quadrature.hpp"
#include "jlt/finite_gap_set.hpp"

namespace jlt {

/**
 * Reflectionless probability measure on a finite gap set E.
 *
 * Determined by one parameter γ_j per gap, β_j <= γ_j <= α_{j+1}. Its
 * m-function is
 *
 *     m(z) = -Π_j (z - γ_j) / Π_{e ∈ ∂E} sqrt(z - e)
 *
 * with principal square roots; the product of the 2N principal roots has its
 * cuts exactly on E and behaves like z^N at infinity, so m ~ -1/z.
 */
class ReflectionlessMeasure {
  public:
    ReflectionlessMeasure(FiniteGapSet set, std::vector<double> gammas);

    const FiniteGapSet& set() const { return set_; }
    const std::vector<double>& gammas() const { return gammas_; }

    /// m(z) = ∫ dρ(t)/(t - z), z off E.
    cplx m_function(cplx z) const;
    /// Density w(t) of dρ at an interior band point.
    double density(double t) const;
    /**
     * π·w(t)·sqrt(|t - α_k||t - β_k|) on band k. This is the smooth factor left
     * after removing the inverse square root endpoint singularity; it is at
     * most 1 on the band.
     */
    double band_factor(std::size_t k, double t) const;

    /// ∫_E dρ(t) / |t - z|^p.
    double moment_integral(cplx z, double p, const QuadratureOptions& opts = {}) const;
    /// ∫_E f(t) dρ(t) for smooth f, with the same per-band substitution.
    template <class F>
    double integrate(F&& f, const QuadratureOptions& opts = {}) const {
        double total = 0.0;
        for (std::size_t k = 0; k < set_.band_count(); ++k) {
            total += chebyshev_band_integral(
                         set_.bands()[k], [&](double t) { return band_factor(k, t) * f(t); }, opts) /
                     std::numbers::pi;
        }
        return total;
    }

  private:
    FiniteGapSet set_;
    std::vector<double> gammas_;
};

/// 1 / [dist(z,E)^{p-1} dist(z,∂E)^{1/2} (1+|z|)^{1/2}], the envelope for p > 1.
double moment_envelope(cplx z, const FiniteGapSet& e, double p);
/// 1 / [dist(z,E)^{eps} dist(z,∂E)^{1/2} (1+|z|)^{1/2-eps}], the envelope for p = 1.
double log_moment_envelope(cplx z, const FiniteGapSet& e, double eps);

/**
 * moment_integral / envelope: a local lower bound for the constant K.
 * p > 1 uses `moment_envelope` (eps ignored); p = 1 needs eps > 0 and uses
 * `log_moment_envelope`.
 */
double moment_ratio(const ReflectionlessMeasure& mu, cplx z, double p, double eps,
                    const QuadratureOptions& opts = {});

/**
 * Single-band weighted integral
 *
 *     ∫_band |t - z|^{-p} dt / sqrt(|t - α||t - β|)
 *
 * multiplied by dist(z, band)^{p-1} sqrt(|z - α||z - β|). For p > 1 this is
 * bounded by a constant depending on p only; the value is invariant under
 * affine maps of the band.
 */
double band_integral_ratio(const Band& band, cplx z, double p, const QuadratureOptions& opts = {});

}  // namespace jlt
