#include "jlt/determinant_eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include <fmt/format.h>

#include "jlt/errors.hpp"

namespace jlt {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kMaxPhaseStep = std::numbers::pi / 4.0;
// Off-center split fractions keep split lines away from symmetry axes (the
// real axis in particular), where eigenvalues of real problems sit.
constexpr double kSplit = 0.4857;
constexpr double kSplitRetry = 0.5371;

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// f vanishes on (or numerically at) the contour.
class BoundaryZero : public ContourError {
  public:
    using ContourError::ContourError;
};

class PhaseTracker {
  public:
    PhaseTracker(const std::function<cplx(cplx)>& f, const ContourBox& box,
                 const std::vector<double>& singular = {})
        : f_(f), box_(box), singular_(singular) {}

    int winding() {
        const cplx c[4] = {box_.lo, {box_.hi.real(), box_.lo.imag()}, box_.hi,
                           {box_.lo.real(), box_.hi.imag()}};
        const int n = std::max(box_.samples, 1);
        double total = 0.0;
        cplx z_prev = c[0];
        cplx f_prev = sample(z_prev);
        const cplx f_start = f_prev;
        for (int side = 0; side < 4; ++side) {
            const cplx a = c[side];
            const cplx b = c[(side + 1) % 4];
            for (int k = 1; k <= n; ++k) {
                const cplx z = k == n ? b : a + (b - a) * (static_cast<double>(k) / n);
                const cplx fz = (side == 3 && k == n) ? f_start : sample(z);
                total += segment(z_prev, f_prev, z, fz);
                z_prev = z;
                f_prev = fz;
            }
        }
        const double turns = total / (2.0 * std::numbers::pi);
        const double w = std::round(turns);
        if (std::abs(turns - w) > 0.05)
            throw ContourError(fmt::format("non-integer winding {} along the box boundary", turns),
                               box_.lo, box_.hi);
        return static_cast<int>(w);
    }

  private:
    cplx sample(cplx z) {
        const cplx v = f_(z);
        if (!finite(v))
            throw ContourError(fmt::format("non-finite function value at {}{:+}i", z.real(), z.imag()),
                               box_.lo, box_.hi);
        if (v == cplx(0.0)) throw BoundaryZero("zero on the box boundary", box_.lo, box_.hi);
        return v;
    }

    static double phase_step(cplx f1, cplx f2) {
        double d = std::arg(f2) - std::arg(f1);
        if (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
        if (d <= -std::numbers::pi) d += 2.0 * std::numbers::pi;
        return d;
    }

    // A segment is accepted once its midpoint confirms it: both half-steps
    // small and f close to linear. Endpoint-only checks alias when several
    // nearby zeros add up to a full turn between two samples.
    double segment(cplx z1, cplx f1, cplx z2, cplx f2) {
        const cplx zm = 0.5 * (z1 + z2);
        const cplx fm = sample(zm);
        const double d1 = phase_step(f1, fm);
        const double d2 = phase_step(fm, f2);
        const double smallest = std::min({std::abs(f1), std::abs(fm), std::abs(f2)});
        if (std::abs(d1) + std::abs(d2) < kMaxPhaseStep && std::abs(fm - 0.5 * (f1 + f2)) < 0.25 * smallest &&
            graded(z1, z2))
            return d1 + d2;
        if (std::abs(z2 - z1) <= 64.0 * kEps * (1.0 + std::abs(z1)))
            throw BoundaryZero("phase tracking bottomed out: zero on or next to the box boundary",
                               box_.lo, box_.hi);
        return segment(z1, f1, zm, fm) + segment(zm, fm, z2, f2);
    }

    // Near a branch point, f varies on the scale of the distance to it; zeros
    // hide there. Segments must be shorter than half that distance.
    bool graded(cplx z1, cplx z2) const {
        const double len = std::abs(z2 - z1);
        for (double x : singular_) {
            const cplx d = z2 - z1;
            const double t = std::clamp(((cplx(x) - z1) * std::conj(d)).real() / std::norm(d), 0.0, 1.0);
            if (len > 0.5 * std::abs(z1 + t * d - x)) return false;
        }
        return true;
    }

    const std::function<cplx(cplx)>& f_;
    ContourBox box_;
    std::vector<double> singular_;
};

bool meets_set(const ContourBox& box, const FiniteGapSet& e) {
    if (box.lo.imag() > 0.0 || box.hi.imag() < 0.0) return false;
    for (const auto& band : e.bands())
        if (band.hi >= box.lo.real() && band.lo <= box.hi.real()) return true;
    return false;
}

class Searcher {
  public:
    Searcher(const PerturbationDeterminant& f, const EigenSearchOptions& opts)
        : det_(f), opts_(opts), sampled_([this](cplx z) { return det_(z); }) {}
    Searcher(const Searcher&) = delete;
    Searcher& operator=(const Searcher&) = delete;

    int winding(const ContourBox& box) const {
        return PhaseTracker(sampled_, box, det_.set().edges()).winding();
    }

    void resolve(const ContourBox& box, int w, std::vector<EigenvalueRecord>& out) const {
        if (w == 0) return;
        if (w < 0)
            throw ContourError(fmt::format("negative winding {} of an analytic function", w), box.lo,
                               box.hi);
        const double scale = 1.0 + std::abs(box.center());
        if (w == 1) {
            if (auto z = secant(box)) {
                out.push_back(record(*z, 1));
                return;
            }
            if (box.diameter() < opts_.tol * scale) {
                out.push_back(record(box.center(), 1));
                return;
            }
        } else if (box.diameter() < opts_.cluster_diameter * scale) {
            out.push_back(record(modified_newton(box, w), w));
            return;
        }

        std::vector<ContourBox> children;
        std::vector<int> windings;
        for (double fraction : {kSplit, kSplitRetry}) {
            children = split(box, fraction);
            windings.clear();
            try {
                int sum = 0;
                for (const auto& c : children) {
                    windings.push_back(winding(c));
                    sum += windings.back();
                }
                if (sum == w) break;
            } catch (const BoundaryZero&) {
            }
            if (fraction == kSplitRetry)
                throw ContourError("subdivision failed: windings of the sub-boxes are inconsistent",
                                   box.lo, box.hi);
        }
        for (std::size_t i = 0; i < children.size(); ++i) resolve(children[i], windings[i], out);
    }

  private:
    EigenvalueRecord record(cplx z, int multiplicity) const {
        double residual = INFINITY;
        try {
            residual = std::abs(det_(z));
        } catch (const Error&) {
        }
        return {z, multiplicity, Method::determinant, residual};
    }

    static std::vector<ContourBox> split(const ContourBox& b, double fraction) {
        const double xm = b.lo.real() + fraction * b.width();
        const double ym = b.lo.imag() + fraction * b.height();
        const int s = b.samples;
        if (b.width() > 2.0 * b.height())
            return {{b.lo, {xm, b.hi.imag()}, s}, {{xm, b.lo.imag()}, b.hi, s}};
        if (b.height() > 2.0 * b.width())
            return {{b.lo, {b.hi.real(), ym}, s}, {{b.lo.real(), ym}, b.hi, s}};
        return {{b.lo, {xm, ym}, s},
                {{xm, b.lo.imag()}, {b.hi.real(), ym}, s},
                {{b.lo.real(), ym}, {xm, b.hi.imag()}, s},
                {{xm, ym}, b.hi, s}};
    }

    std::optional<cplx> secant(const ContourBox& box) const {
        const double diam = box.diameter();
        cplx z0 = box.center();
        cplx z1 = z0 + 1e-3 * diam * cplx(0.6, 0.8);
        try {
            cplx f0 = det_(z0);
            cplx f1 = det_(z1);
            for (int it = 0; it < 100; ++it) {
                if (f1 == cplx(0.0)) return box.contains(z1) ? std::optional(z1) : std::nullopt;
                if (f1 == f0) return std::nullopt;
                const cplx z2 = z1 - f1 * (z1 - z0) / (f1 - f0);
                if (!finite(z2) || std::abs(z2 - box.center()) > 2.0 * diam) return std::nullopt;
                z0 = z1;
                f0 = f1;
                z1 = z2;
                f1 = det_(z1);
                if (std::abs(z1 - z0) <= 1e-13 * (1.0 + std::abs(z1)))
                    return box.contains(z1) ? std::optional(z1) : std::nullopt;
            }
        } catch (const Error&) {
            // the iterate left Ω
        }
        return std::nullopt;
    }

    cplx modified_newton(const ContourBox& box, int w) const {
        cplx z = box.center();
        try {
            for (int it = 0; it < 50; ++it) {
                const double h = 1e-3 * box.diameter();
                const cplx fz = det_(z);
                if (fz == cplx(0.0)) break;
                const cplx df = (det_(z + h) - det_(z - h)) / (2.0 * h);
                if (df == cplx(0.0)) break;
                const cplx next = z - static_cast<double>(w) * fz / df;
                if (!finite(next) || !box.contains(next)) return box.center();
                const bool done = std::abs(next - z) <= 4.0 * kEps * (1.0 + std::abs(z));
                z = next;
                if (done) break;
            }
        } catch (const Error&) {
            return box.center();
        }
        return z;
    }

    const PerturbationDeterminant& det_;
    EigenSearchOptions opts_;
    std::function<cplx(cplx)> sampled_;
};

// Whole-box search; BoundaryZero propagates to the caller.
std::vector<EigenvalueRecord> search_box(const Searcher& s, const ContourBox& box) {
    std::vector<EigenvalueRecord> out;
    s.resolve(box, s.winding(box), out);
    return out;
}

}  // namespace

std::string to_string(Method m) { return m == Method::determinant ? "determinant" : "truncation"; }

void sort_records(std::vector<EigenvalueRecord>& records) {
    std::sort(records.begin(), records.end(), [](const auto& x, const auto& y) {
        if (x.z.real() != y.z.real()) return x.z.real() < y.z.real();
        return x.z.imag() < y.z.imag();
    });
}

cplx regularized_det(const CMatrix& a, int m) {
    if (m < 1) throw UsageError("regularized determinant needs m >= 1");
    if (a.rows() != a.cols()) throw UsageError("regularized determinant needs a square matrix");
    if (m == 1) return determinant(CMatrix::Identity(a.rows(), a.cols()) + a);
    cplx out = 1.0;
    for (cplx lambda : eigenvalues(a)) {
        cplx correction = 0.0;
        cplx power = 1.0;
        for (int k = 1; k < m; ++k) {
            power *= -lambda;
            correction += power / static_cast<double>(k);
        }
        out *= (1.0 + lambda) * std::exp(correction);
    }
    return out;
}

PerturbationDeterminant::PerturbationDeterminant(PeriodicJacobi j, const Perturbation& dj, int m)
    : j_(std::move(j)), e_(spectrum(j_)), factored_(factor(dj)), b_(factored_.b_on_support()), m_(m) {
    if (m < 1) throw UsageError("perturbation determinant needs m >= 1");
}

cplx PerturbationDeterminant::operator()(cplx z) const {
    if (e_.contains(z)) throw DomainError("perturbation determinant evaluated on E");
    if (b_.rows() == 0) return 1.0;
    return regularized_det(sandwich(j_, factored_.d, z) * b_, m_);
}

cplx perturbation_determinant(const PeriodicJacobi& j, const Perturbation& dj, cplx z, int m) {
    return PerturbationDeterminant(j, dj, m)(z);
}

int winding_number(const std::function<cplx(cplx)>& f, const ContourBox& box,
                   const std::vector<double>& branch_points) {
    if (!(box.width() > 0.0 && box.height() > 0.0)) throw UsageError("contour box must have positive area");
    return PhaseTracker(f, box, branch_points).winding();
}

std::vector<EigenvalueRecord> find_eigenvalues(const PeriodicJacobi& j, const Perturbation& dj,
                                               const ContourBox& region, const EigenSearchOptions& opts) {
    if (!(region.width() > 0.0 && region.height() > 0.0))
        throw UsageError("contour box must have positive area");
    const PerturbationDeterminant det(j, dj);
    if (meets_set(region, det.set())) throw UsageError("contour box meets the essential spectrum");
    if (det.support_size() == 0) return {};

    const Searcher searcher(det, opts);
    std::vector<EigenvalueRecord> out;
    try {
        out = search_box(searcher, region);
    } catch (const BoundaryZero&) {
        // move the boundary by a fraction of the sample spacing and retry once
        const double spacing = std::max(region.width(), region.height()) / std::max(region.samples, 1);
        const cplx shift = 0.37 * spacing * cplx(1.0, 1.0);
        ContourBox moved{region.lo - shift, region.hi + shift, region.samples};
        if (meets_set(moved, det.set())) moved = {region.lo + shift, region.hi - shift, region.samples};
        try {
            out = search_box(searcher, moved);
        } catch (const BoundaryZero& err) {
            throw ContourError(fmt::format("{} (after one perturbation of the boundary)", err.what()),
                               err.lo(), err.hi());
        }
    }
    sort_records(out);
    return out;
}

namespace {

SearchRegion build_region(const FiniteGapSet& e, double tau, double r, int samples) {
    SearchRegion region;
    region.tube_radius = tau;
    region.reach = r;
    const auto& bands = e.bands();
    auto add = [&](double x0, double y0, double x1, double y1) {
        region.boxes.push_back({{x0, y0}, {x1, y1}, samples});
    };
    add(e.lower() - r, -r, bands.front().lo - tau, r);
    for (std::size_t k = 0; k < bands.size(); ++k) {
        add(bands[k].lo - tau, tau, bands[k].hi + tau, r);
        add(bands[k].lo - tau, -r, bands[k].hi + tau, -tau);
        if (k + 1 < bands.size()) add(bands[k].hi + tau, -r, bands[k + 1].lo - tau, r);
    }
    add(bands.back().hi + tau, -r, e.upper() + r, r);
    return region;
}

}  // namespace

SearchRegion default_region(const FiniteGapSet& e, const Perturbation& dj, double tol, int samples) {
    if (!(tol > 0.0)) throw UsageError("search tolerance must be positive");
    return build_region(e, tol, std::max(2.0, 2.0 * dj.max_line_sum()), samples);
}

EigenSearchResult find_all_eigenvalues(const PeriodicJacobi& j, const Perturbation& dj,
                                       const EigenSearchOptions& opts) {
    const PerturbationDeterminant det(j, dj);
    const SearchRegion region = default_region(det.set(), dj, opts.tol, opts.samples);
    EigenSearchResult result;
    result.tube_radius = region.tube_radius;
    if (det.support_size() == 0) return result;

    const Searcher searcher(det, opts);
    auto run = [&](const SearchRegion& r) {
        std::vector<EigenvalueRecord> out;
        for (const auto& box : r.boxes) {
            const auto found = search_box(searcher, box);
            out.insert(out.end(), found.begin(), found.end());
        }
        return out;
    };
    try {
        result.eigenvalues = run(region);
    } catch (const BoundaryZero&) {
        // an eigenvalue sits on a shared side: move every side once
        const SearchRegion moved =
            build_region(det.set(), 2.1 * region.tube_radius, 1.0731 * region.reach, opts.samples);
        try {
            result.eigenvalues = run(moved);
            result.tube_radius = moved.tube_radius;
        } catch (const BoundaryZero& err) {
            throw ContourError(fmt::format("{} (after one perturbation of the region)", err.what()),
                               err.lo(), err.hi());
        }
    }
    sort_records(result.eigenvalues);
    return result;
}

std::vector<EigenvalueRecord> truncated_eigenvalues(const PeriodicJacobi& j, const Perturbation& dj,
                                                    long m, double filter_dist, double tol) {
    if (!(filter_dist > 0.0)) throw UsageError("filter distance must be positive");
    if (m < 10 * static_cast<long>(dj.width()))
        throw UsageError(fmt::format("truncation half-size {} is below 10 × window width {}", m, dj.width()));
    if (dj.n0() < -m || dj.n1() + 1 > m)
        throw UsageError("perturbation window does not fit inside the truncation");

    auto truncation = [&](long half) {
        Tridiagonal t;
        for (long n = -half; n <= half; ++n) t.diag.push_back(j.b(n) + dj.b(n));
        for (long n = -half; n < half; ++n) {
            t.sub.push_back(j.a(n) + dj.a(n));
            t.super.push_back(j.a(n) + dj.c(n));
        }
        return t;
    };
    const FiniteGapSet e = spectrum(j);
    const long q = j.period();
    long s = 0;
    while (q > 1 && (m + s) % q == 0) ++s;

    const Tridiagonal t = truncation(m);
    const auto first = tridiagonal_eigenvalues(t);
    const auto second = tridiagonal_eigenvalues(truncation(2 * m + s));
    auto localized = [&](cplx z) {
        const auto v = tridiagonal_eigenvector(t, z);
        double outer = 0.0;
        for (long n = -m; n <= m; ++n)
            if (2 * std::abs(n) > m) outer += std::norm(v[static_cast<std::size_t>(n + m)]);
        return outer < 1e-4;
    };
    std::vector<EigenvalueRecord> kept;
    for (cplx z : first) {
        if (!(dist_to_set(z, e) > filter_dist)) continue;
        double moved = INFINITY;
        for (cplx y : second) moved = std::min(moved, std::abs(y - z));
        if (moved < 1e-6 && localized(z)) kept.push_back({z, 1, Method::truncation, moved});
    }
    sort_records(kept);

    std::vector<EigenvalueRecord> out;
    std::vector<bool> used(kept.size(), false);
    for (std::size_t i = 0; i < kept.size(); ++i) {
        if (used[i]) continue;
        EigenvalueRecord rec = kept[i];
        cplx sum = rec.z;
        for (std::size_t k = i + 1; k < kept.size(); ++k) {
            if (used[k] || std::abs(kept[k].z - kept[i].z) > 10.0 * tol) continue;
            used[k] = true;
            ++rec.multiplicity;
            sum += kept[k].z;
            rec.residual = std::max(rec.residual, kept[k].residual);
        }
        rec.z = sum / static_cast<double>(rec.multiplicity);
        out.push_back(rec);
    }
    return out;
}

}  // namespace jlt
