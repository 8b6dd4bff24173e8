#include "jlt/lt_bounds.hpp"

#include <cmath>

#include <fmt/format.h>

#include "jlt/errors.hpp"
#include "jlt/parallel.hpp"

namespace jlt {

void check_applicable(const InequalitySpec& spec, const Perturbation& dj) {
    if (is_selfadjoint_kind(spec.kind) && !dj.is_selfadjoint())
        throw UsageError(fmt::format("{} needs a selfadjoint perturbation (real δb, δa = δc real)",
                                     to_string(spec.kind)));
}

BoundReport bound_report(const FiniteGapSet& e, const Perturbation& dj, const InequalitySpec& spec,
                         std::vector<EigenvalueRecord> eigenvalues, double tube_radius) {
    check_applicable(spec, dj);
    BoundReport r;
    r.spec = spec;
    r.unresolved_tube_radius = tube_radius;
    for (const auto& ev : eigenvalues) {
        r.lhs += ev.multiplicity * eigenvalue_weight(ev.z, e, spec);
        r.eigenvalue_count += ev.multiplicity;
    }
    r.rhs_sum = lp_sum(dj, spec.p);
    if (r.rhs_sum > 0.0) r.ratio = r.lhs / r.rhs_sum;
    else if (r.lhs > 0.0) r.ratio = INFINITY;
    r.eigenvalues = std::move(eigenvalues);
    return r;
}

BoundReport inequality_report(const PeriodicJacobi& j, const Perturbation& dj, const InequalitySpec& spec,
                              const EigenSearchOptions& opts) {
    check_applicable(spec, dj);
    const FiniteGapSet e = spectrum(j);
    // reject specs that cannot be evaluated on E before the search runs
    (void)eigenvalue_weight(cplx(e.upper() + 1.0, 0.0), e, spec);
    auto found = find_all_eigenvalues(j, dj, opts);
    return bound_report(e, dj, spec, std::move(found.eigenvalues), found.tube_radius);
}

SweepResult scaling_sweep(const PeriodicJacobi& j, const Perturbation& dj, const InequalitySpec& spec,
                          const std::vector<double>& t_grid, const EigenSearchOptions& opts) {
    for (double t : t_grid)
        if (!(t > 0.0) || !std::isfinite(t)) throw UsageError("sweep grid must hold positive finite t");
    check_applicable(spec, dj);
    SweepResult out;
    out.t = t_grid;
    out.reports = parallel_map<BoundReport>(t_grid.size(), [&](std::size_t i) {
        return inequality_report(j, dj.scaled(t_grid[i]), spec, opts);
    });
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (i == 0 || out.reports[i].ratio > out.max_ratio) {
            out.max_ratio = out.reports[i].ratio;
            out.argmax_t = t_grid[i];
        }
    }
    return out;
}

std::vector<double> log_grid(double lo, double hi, int n) {
    if (!(lo > 0.0 && hi >= lo) || n < 1) throw UsageError("log grid needs 0 < lo <= hi and n >= 1");
    std::vector<double> out;
    for (int i = 0; i < n; ++i) {
        const double s = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
        out.push_back(lo * std::pow(hi / lo, s));
    }
    out.back() = hi;
    return out;
}

}  // namespace jlt
