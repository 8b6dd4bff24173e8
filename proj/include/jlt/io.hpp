#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "jlt/determinant_eigensolver.hpp"
#include "jlt/finite_gap_set.hpp"
#include "jlt/lt_bounds.hpp"
#include "jlt/periodic_jacobi.hpp"
#include "jlt/perturbation.hpp"
#include "jlt/reflectionless.hpp"

namespace jlt::io {

using json = nlohmann::ordered_json;

// Complex numbers are [re, im]; plain numbers are accepted as real on input.
json to_json(cplx z);
cplx complex_from_json(const json& j);

json to_json(const FiniteGapSet& e);                 ///< {"bands": [[lo, hi], ...]}
FiniteGapSet gap_set_from_json(const json& j);

json to_json(const ReflectionlessMeasure& mu);       ///< {"bands": ..., "gammas": [...]}
ReflectionlessMeasure measure_from_json(const json& j);

json to_json(const PeriodicJacobi& j);               ///< {"period": q, "a": [...], "b": [...]}
PeriodicJacobi background_from_json(const json& j);

json to_json(const Perturbation& dj);                ///< {"n0": n, "da": [[re, im], ...], "db": ..., "dc": ...}
Perturbation perturbation_from_json(const json& j);

/// {"kind": "lt-nsa", "p": 1, "eps": 0.1}; eps = 0 on an eps kind yields an exploratory spec.
json to_json(const InequalitySpec& s);
InequalitySpec spec_from_json(const json& j);

json to_json(const EigenvalueRecord& r, const FiniteGapSet& e);
/// {"spec", "p", "eps", "lhs", "rhs", "ratio", "eigenvalue_count", "unresolved_tube_radius", "exploratory", "eigenvalues"}
json to_json(const BoundReport& r, const FiniteGapSet& e);

/// Header re,im,multiplicity,method,residual,dist_E,dist_edges; doubles in round-trip precision.
void write_eigenvalue_csv(std::ostream& out, const std::vector<EigenvalueRecord>& records, const FiniteGapSet& e);
std::vector<EigenvalueRecord> read_eigenvalue_csv(std::istream& in);

/// Static scatter of eigenvalues over the bands of E, with ∂E marked.
std::string eigenvalue_svg(const std::vector<EigenvalueRecord>& records, const FiniteGapSet& e,
                           const std::string& title = "");

}  // namespace jlt::io
