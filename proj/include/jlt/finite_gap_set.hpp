#pragma once

#include <complex>
#include <vector>
#include <string>
#include <string_view>

namespace jlt {

using cplx = std::complex<double>;

/// Closed real interval [lo, hi] with lo < hi.
struct Band {
    double lo;
    double hi;

    double mid() const { return 0.5 * (lo + hi); }
    double half_width() const { return 0.5 * (hi - lo); }
    double distance(cplx z) const;

    bool operator==(const Band&) const = default;
};

/**
 * A finite union of disjoint closed bands
 *
 *     E = [α_1, β_1] ∪ ... ∪ [α_N, β_N],   α_1 < β_1 < α_2 < ... < β_N.
 *
 * Touching bands are rejected, never merged. The endpoint list ∂E is
 * {α_1, β_1, ..., α_N, β_N} in increasing order.
 */
class FiniteGapSet {
  public:
    explicit FiniteGapSet(std::vector<Band> bands);

    const std::vector<Band>& bands() const { return bands_; }
    const std::vector<double>& edges() const { return edges_; }
    std::size_t band_count() const { return bands_.size(); }

    double lower() const { return bands_.front().lo; }
    double upper() const { return bands_.back().hi; }

    /// True when z is real and lies in some band (endpoints included).
    bool contains(cplx z) const;
    /// Index of the band whose interior contains t, or -1.
    int interior_band(double t) const;

    bool operator==(const FiniteGapSet&) const = default;

  private:
    std::vector<Band> bands_;
    std::vector<double> edges_;
};

/// Euclidean distance from z to E; zero exactly on E.
double dist_to_set(cplx z, const FiniteGapSet& e);
/// Distance from z to the nearest endpoint of E.
double dist_to_edges(cplx z, const FiniteGapSet& e);

/// x^e with the convention 0^0 = 1.
double pow0(double x, double e);

enum class InequalityKind { LT_SA, KATO_SA, ULTIMATE_SA, LT0_NSA, KATO_NSA, LT_NSA };

std::string_view to_string(InequalityKind kind);
InequalityKind inequality_kind_from_string(std::string_view name);

/// Whether the inequality is stated for selfadjoint perturbations only.
bool is_selfadjoint_kind(InequalityKind kind);

/**
 * One of the six eigenvalue-sum inequalities together with its exponents.
 *
 * Use `make` for the inequalities as stated (eps > 0 for LT0_NSA and
 * LT_NSA, p > 1 for KATO_NSA). `exploratory` additionally admits eps = 0,
 * the open endpoint, and marks the result as exploratory so reports can say so.
 */
struct InequalitySpec {
    InequalityKind kind = InequalityKind::LT_NSA;
    double p = 1.0;
    double eps = 0.0;
    bool exploratory = false;

    static InequalitySpec make(InequalityKind kind, double p, double eps = 0.0);
    static InequalitySpec explore(InequalityKind kind, double p, double eps = 0.0);

    bool uses_eps() const {
        return kind == InequalityKind::LT0_NSA || kind == InequalityKind::LT_NSA;
    }
};

/// Contribution of a single eigenvalue z to the left-hand side of `spec`.
double eigenvalue_weight(cplx z, const FiniteGapSet& e, const InequalitySpec& spec);

}  // namespace jlt
