#pragma once

#include <vector>

#include "jlt/determinant_eigensolver.hpp"
#include "jlt/finite_gap_set.hpp"
#include "jlt/periodic_jacobi.hpp"
#include "jlt/perturbation.hpp"

namespace jlt {

/**
 * Both sides of one eigenvalue-sum inequality for a concrete J = J' + δJ.
 * `ratio` = lhs / rhs_sum is an empirical lower bound for the constant in
 * the inequality (0 when both sides vanish).
 */
struct BoundReport {
    InequalitySpec spec;
    double lhs = 0.0;
    double rhs_sum = 0.0;
    double ratio = 0.0;
    int eigenvalue_count = 0;             ///< with multiplicity
    double unresolved_tube_radius = 0.0;  ///< eigenvalues closer than this to E were not searched
    std::vector<EigenvalueRecord> eigenvalues;
};

/// Throws UsageError when a selfadjoint-only spec meets a non-selfadjoint δJ.
void check_applicable(const InequalitySpec& spec, const Perturbation& dj);

/**
 * Report from already located eigenvalues: lhs = Σ weight · multiplicity,
 * rhs_sum = Σ |δa|^p + |δb|^p + |δc|^p.
 */
BoundReport bound_report(const FiniteGapSet& e, const Perturbation& dj, const InequalitySpec& spec,
                         std::vector<EigenvalueRecord> eigenvalues, double tube_radius);

/// Locates the eigenvalues with the determinant method over the default region, then reports.
BoundReport inequality_report(const PeriodicJacobi& j, const Perturbation& dj, const InequalitySpec& spec,
                              const EigenSearchOptions& opts = {});

struct SweepResult {
    std::vector<double> t;
    std::vector<BoundReport> reports;  ///< one per t, in grid order
    double max_ratio = 0.0;            ///< the empirical constant for the family t · δJ
    double argmax_t = 0.0;
};

/// inequality_report for t · δJ over the grid; grid points run in parallel.
SweepResult scaling_sweep(const PeriodicJacobi& j, const Perturbation& dj, const InequalitySpec& spec,
                          const std::vector<double>& t_grid, const EigenSearchOptions& opts = {});

/// n log-spaced points from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int n);

}  // namespace jlt
