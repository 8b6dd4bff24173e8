#include "jlt/finite_gap_set.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "jlt/errors.hpp"

namespace jlt {

double Band::distance(cplx z) const {
    const double x = std::clamp(z.real(), lo, hi);
    return std::abs(z - cplx(x, 0.0));
}

FiniteGapSet::FiniteGapSet(std::vector<Band> bands) : bands_(std::move(bands)) {
    if (bands_.empty()) throw UsageError("finite gap set needs at least one band");
    for (std::size_t k = 0; k < bands_.size(); ++k) {
        const auto& b = bands_[k];
        if (!std::isfinite(b.lo) || !std::isfinite(b.hi))
            throw UsageError(fmt::format("band {} has a non-finite endpoint", k));
        if (!(b.lo < b.hi))
            throw UsageError(fmt::format("band {} is empty or reversed: [{}, {}]", k, b.lo, b.hi));
        if (k > 0 && !(bands_[k - 1].hi < b.lo))
            throw UsageError(fmt::format("bands {} and {} overlap or touch", k - 1, k));
    }
    edges_.reserve(2 * bands_.size());
    for (const auto& b : bands_) {
        edges_.push_back(b.lo);
        edges_.push_back(b.hi);
    }
}

bool FiniteGapSet::contains(cplx z) const {
    if (z.imag() != 0.0) return false;
    const double x = z.real();
    return std::any_of(bands_.begin(), bands_.end(),
                       [x](const Band& b) { return b.lo <= x && x <= b.hi; });
}

int FiniteGapSet::interior_band(double t) const {
    for (std::size_t k = 0; k < bands_.size(); ++k)
        if (bands_[k].lo < t && t < bands_[k].hi) return static_cast<int>(k);
    return -1;
}

double dist_to_set(cplx z, const FiniteGapSet& e) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& b : e.bands()) d = std::min(d, b.distance(z));
    return d;
}

double dist_to_edges(cplx z, const FiniteGapSet& e) {
    double d = std::numeric_limits<double>::infinity();
    for (double x : e.edges()) d = std::min(d, std::abs(z - x));
    return d;
}

double pow0(double x, double e) {
    if (e == 0.0) return 1.0;
    return std::pow(x, e);
}

std::string_view to_string(InequalityKind kind) {
    switch (kind) {
    case InequalityKind::LT_SA: return "lt-sa";
    case InequalityKind::KATO_SA: return "kato-sa";
    case InequalityKind::ULTIMATE_SA: return "ultimate-sa";
    case InequalityKind::LT0_NSA: return "lt0-nsa";
    case InequalityKind::KATO_NSA: return "kato-nsa";
    case InequalityKind::LT_NSA: return "lt-nsa";
    }
    return "?";
}

InequalityKind inequality_kind_from_string(std::string_view name) {
    std::string s(name);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
        return c == '_' ? '-' : static_cast<char>(std::tolower(c));
    });
    for (auto k : {InequalityKind::LT_SA, InequalityKind::KATO_SA, InequalityKind::ULTIMATE_SA,
                   InequalityKind::LT0_NSA, InequalityKind::KATO_NSA, InequalityKind::LT_NSA})
        if (to_string(k) == s) return k;
    throw UsageError(fmt::format("unknown inequality '{}'", name));
}

bool is_selfadjoint_kind(InequalityKind kind) {
    return kind == InequalityKind::LT_SA || kind == InequalityKind::KATO_SA ||
           kind == InequalityKind::ULTIMATE_SA;
}

namespace {

void check_spec(const InequalitySpec& s, bool allow_zero_eps) {
    if (!(s.p >= 1.0) || !std::isfinite(s.p))
        throw UsageError(fmt::format("{}: p must be >= 1, got {}", to_string(s.kind), s.p));
    if (s.kind == InequalityKind::KATO_NSA && !(s.p > 1.0))
        throw UsageError("kato-nsa is stated for p > 1 only");
    if (s.uses_eps()) {
        if (!(s.eps >= 0.0) || !std::isfinite(s.eps))
            throw UsageError(fmt::format("{}: eps must be >= 0", to_string(s.kind)));
        if (s.eps == 0.0 && !allow_zero_eps)
            throw UsageError(fmt::format("{}: eps must be > 0 (eps = 0 is an open problem)",
                                         to_string(s.kind)));
    }
}

}  // namespace

InequalitySpec InequalitySpec::make(InequalityKind kind, double p, double eps) {
    InequalitySpec s{kind, p, eps, false};
    check_spec(s, false);
    return s;
}

InequalitySpec InequalitySpec::explore(InequalityKind kind, double p, double eps) {
    InequalitySpec s{kind, p, eps, false};
    check_spec(s, true);
    s.exploratory = s.uses_eps() && eps == 0.0;
    return s;
}

double eigenvalue_weight(cplx z, const FiniteGapSet& e, const InequalitySpec& spec) {
    if (e.contains(z))
        throw DomainError(fmt::format("eigenvalue weight undefined on E (z = {}{:+}i)", z.real(),
                                      z.imag()));
    const double d = dist_to_set(z, e);
    const double p = spec.p;
    const double eps = spec.eps;
    switch (spec.kind) {
    case InequalityKind::LT_SA: return pow0(d, p - 0.5);
    case InequalityKind::KATO_SA:
    case InequalityKind::KATO_NSA: return pow0(d, p);
    case InequalityKind::ULTIMATE_SA: return pow0(d, p - 0.5) * std::sqrt(1.0 + std::abs(z));
    case InequalityKind::LT0_NSA: {
        if (e.band_count() != 1 || std::abs(e.lower() + 2.0) > 1e-9 ||
            std::abs(e.upper() - 2.0) > 1e-9)
            throw UsageError("lt0-nsa is stated for E = [-2, 2] only");
        return pow0(d, p + eps) / std::sqrt(std::abs(z * z - 4.0));
    }
    case InequalityKind::LT_NSA:
        return pow0(d, p + eps) * pow0(1.0 + std::abs(z), 0.5 * (1.0 - 3.0 * eps)) /
               std::sqrt(dist_to_edges(z, e));
    }
    return 0.0;
}

}  // namespace jlt
