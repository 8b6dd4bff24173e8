#include "jlt/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "jlt/errors.hpp"

namespace jlt {

namespace {

bool finite(cplx x) { return std::isfinite(x.real()) && std::isfinite(x.imag()); }

}  // namespace

Perturbation::Perturbation(long n0, std::vector<cplx> da, std::vector<cplx> db, std::vector<cplx> dc)
    : n0_(n0), da_(std::move(da)), db_(std::move(db)), dc_(std::move(dc)) {
    if (db_.empty()) throw UsageError("perturbation window must not be empty");
    if (da_.size() != db_.size() || dc_.size() != db_.size())
        throw UsageError(fmt::format("da, db, dc must have equal length ({}, {}, {})", da_.size(),
                                     db_.size(), dc_.size()));
    for (const auto* v : {&da_, &db_, &dc_})
        for (const auto& x : *v)
            if (!finite(x)) throw UsageError("perturbation entries must be finite");
}

Perturbation Perturbation::diagonal_site(long n, cplx value) {
    return Perturbation(n, {0.0}, {value}, {0.0});
}

bool Perturbation::is_zero() const {
    auto nz = [](const std::vector<cplx>& v) {
        return std::any_of(v.begin(), v.end(), [](cplx x) { return x != cplx(0.0); });
    };
    return !nz(da_) && !nz(db_) && !nz(dc_);
}

bool Perturbation::is_selfadjoint() const {
    for (std::size_t i = 0; i < db_.size(); ++i) {
        if (db_[i].imag() != 0.0) return false;
        if (da_[i].imag() != 0.0 || dc_[i].imag() != 0.0) return false;
        if (da_[i] != dc_[i]) return false;
    }
    return true;
}

Perturbation Perturbation::conjugate() const {
    auto conj = [](std::vector<cplx> v) {
        for (auto& x : v) x = std::conj(x);
        return v;
    };
    return Perturbation(n0_, conj(da_), conj(db_), conj(dc_));
}

Perturbation Perturbation::scaled(double t) const {
    auto scale = [t](std::vector<cplx> v) {
        for (auto& x : v) x *= t;
        return v;
    };
    return Perturbation(n0_, scale(da_), scale(db_), scale(dc_));
}

double Perturbation::max_line_sum() const {
    const CMatrix m = dense();
    double best = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        best = std::max(best, m.row(i).cwiseAbs().sum());
        best = std::max(best, m.col(i).cwiseAbs().sum());
    }
    return best;
}

CMatrix Perturbation::dense() const {
    const auto size = static_cast<Eigen::Index>(width() + 1);
    CMatrix m = CMatrix::Zero(size, size);
    for (Eigen::Index i = 0; i + 1 < size; ++i) {
        const auto k = static_cast<std::size_t>(i);
        m(i, i) = db_[k];
        m(i + 1, i) = da_[k];
        m(i, i + 1) = dc_[k];
    }
    return m;
}

std::vector<long> Diagonal::support() const {
    std::vector<long> s;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i] > 0.0) s.push_back(first + static_cast<long>(i));
    return s;
}

double Diagonal::power_sum(double p) const {
    double s = 0.0;
    for (double v : values)
        if (v > 0.0) s += std::pow(v, p);
    return s;
}

CMatrix FactoredPerturbation::b_on_support() const {
    const auto k = static_cast<Eigen::Index>(support.size());
    CMatrix out(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j)
            out(i, j) = b(support[static_cast<std::size_t>(i)] - d.first,
                          support[static_cast<std::size_t>(j)] - d.first);
    return out;
}

FactoredPerturbation factor(const Perturbation& dj) {
    FactoredPerturbation f;
    f.d.first = dj.n0();
    const long last = dj.n1() + 1;
    for (long n = dj.n0(); n <= last; ++n) {
        f.d.values.push_back(std::max({std::abs(dj.a(n - 1)), std::abs(dj.a(n)), std::abs(dj.b(n)),
                                       std::abs(dj.c(n - 1)), std::abs(dj.c(n))}));
    }
    const auto size = static_cast<Eigen::Index>(f.d.values.size());
    f.b = CMatrix::Zero(size, size);
    auto entry = [&](cplx value, long r, long c) {
        const double scale = std::sqrt(f.d(r) * f.d(c));
        if (scale > 0.0) f.b(r - f.d.first, c - f.d.first) = value / scale;
    };
    for (long n = dj.n0(); n <= dj.n1(); ++n) {
        entry(dj.b(n), n, n);
        entry(dj.a(n), n + 1, n);
        entry(dj.c(n), n, n + 1);
    }
    f.support = f.d.support();
    return f;
}

double lp_sum(const Perturbation& dj, double p) {
    if (!(p >= 1.0)) throw UsageError("lp_sum needs p >= 1");
    double s = 0.0;
    for (const auto* v : {&dj.da(), &dj.db(), &dj.dc()})
        for (const auto& x : *v)
            if (x != cplx(0.0)) s += std::pow(std::abs(x), p);
    return s;
}

CMatrix sandwich(const PeriodicJacobi& j, const Diagonal& d, cplx z) {
    const std::vector<long> support = d.support();
    const auto k = static_cast<Eigen::Index>(support.size());
    CMatrix out(k, k);
    if (k == 0) return out;
    const FloquetResolvent g(j, z);
    for (Eigen::Index r = 0; r < k; ++r) {
        const long n = support[static_cast<std::size_t>(r)];
        for (Eigen::Index c = r; c < k; ++c) {
            const long m = support[static_cast<std::size_t>(c)];
            out(r, c) = std::sqrt(d(n) * d(m)) * g(n, m);
            out(c, r) = out(r, c);
        }
    }
    return out;
}

CMatrix sandwich(const PeriodicJacobi& j, const Perturbation& dj, cplx z) {
    return sandwich(j, factor(dj).d, z);
}

double schatten_norm(const CMatrix& a, double p) {
    if (!(p >= 1.0)) throw UsageError("Schatten norm needs p >= 1");
    if (a.size() == 0) return 0.0;
    const std::vector<double> sv = singular_values(a);
    if (std::isinf(p)) return sv.front();
    double s = 0.0;
    for (double x : sv)
        if (x > 0.0) s += std::pow(x, p);
    return std::pow(s, 1.0 / p);
}

SandwichBound sandwich_bound(const PeriodicJacobi& j, const Diagonal& d, cplx z, double p,
                             const QuadratureOptions& opts) {
    if (!(p >= 1.0)) throw UsageError("sandwich bound needs p >= 1");
    for (double v : d.values)
        if (!(v >= 0.0)) throw UsageError("diagonal entries must be nonnegative");
    const FiniteGapSet e = spectrum(j);
    if (e.contains(z)) throw DomainError("sandwich bound evaluated on the spectrum");

    SandwichBound out;
    const double dsum = d.power_sum(p);
    if (dsum == 0.0) return out;

    const double norm = schatten_norm(sandwich(j, d, z), p);
    out.lhs = std::pow(norm, p);
    for (long n = 0; n < j.period(); ++n)
        out.moment = std::max(out.moment, abs_resolvent_moment(j, n, z, opts));
    out.rhs = std::numbers::sqrt2 * dsum * out.moment / pow0(dist_to_set(z, e), p - 1.0);
    out.holds = out.lhs <= out.rhs * (1.0 + 1e-9);
    return out;
}

}  // namespace jlt
