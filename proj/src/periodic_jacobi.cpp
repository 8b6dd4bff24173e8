#include "jlt/periodic_jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "jlt/errors.hpp"
#include "jlt/linalg.hpp"

namespace jlt {

PeriodicJacobi::PeriodicJacobi(std::vector<double> a, std::vector<double> b)
    : a_(std::move(a)), b_(std::move(b)) {
    if (a_.empty()) throw UsageError("periodic Jacobi matrix needs period >= 1");
    if (a_.size() != b_.size())
        throw UsageError(fmt::format("coefficient lists differ in length ({} vs {})", a_.size(),
                                     b_.size()));
    for (std::size_t n = 0; n < a_.size(); ++n) {
        if (!(a_[n] > 0.0) || !std::isfinite(a_[n]))
            throw UsageError(fmt::format("a[{}] = {} must be positive and finite", n, a_[n]));
        if (!std::isfinite(b_[n])) throw UsageError(fmt::format("b[{}] is not finite", n));
    }
}

PeriodicJacobi PeriodicJacobi::free() { return PeriodicJacobi({1.0}, {0.0}); }

namespace {

Mat2 multiply(const Mat2& x, const Mat2& y) {
    Mat2 r{};
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k) r[i][k] = x[i][0] * y[0][k] + x[i][1] * y[1][k];
    return r;
}

std::array<cplx, 2> eigenvector(const Mat2& m, cplx rho) {
    std::array<cplx, 2> v1{m[0][1], rho - m[0][0]};
    std::array<cplx, 2> v2{rho - m[1][1], m[1][0]};
    const double n1 = std::hypot(std::abs(v1[0]), std::abs(v1[1]));
    const double n2 = std::hypot(std::abs(v2[0]), std::abs(v2[1]));
    auto& v = n1 >= n2 ? v1 : v2;
    const double nv = std::max(n1, n2);
    if (nv == 0.0) throw DegeneracyError("monodromy has a degenerate eigenvector");
    v[0] /= nv;
    v[1] /= nv;
    return v;
}

double real_discriminant(const PeriodicJacobi& j, double x) {
    return discriminant(j, cplx(x, 0.0)).real();
}

// Roots of Δ(x) = target, starting from eigenvalues of the q×q Floquet restriction.
std::vector<double> edge_roots(const PeriodicJacobi& j, double target) {
    const int q = j.period();
    const double sign = target > 0.0 ? 1.0 : -1.0;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(q, q);
    for (int i = 0; i < q; ++i) h(i, i) = j.b(i);
    for (int i = 0; i + 1 < q; ++i) {
        h(i, i + 1) += j.a(i);
        h(i + 1, i) += j.a(i);
    }
    h(q - 1, 0) += sign * j.a(q - 1);
    h(0, q - 1) += sign * j.a(q - 1);
    std::vector<double> approx = symmetric_eigenvalues(h);

    double scale = 1.0;
    for (int i = 0; i < q; ++i) scale = std::max({scale, std::abs(j.b(i)), j.a(i)});

    std::vector<double> roots;
    for (std::size_t i = 0; i < approx.size(); ++i) {
        const double x = approx[i];
        if (i + 1 < approx.size() && approx[i + 1] - x < 1e-10 * scale)
            throw DegeneracyError(fmt::format("closed gap near x = {}: Δ = {} has a double root", x,
                                              target));
        const double left = i == 0 ? x - scale : 0.5 * (approx[i - 1] + x);
        const double right = i + 1 == approx.size() ? x + scale : 0.5 * (x + approx[i + 1]);
        double lo = left, hi = right;
        double flo = real_discriminant(j, lo) - target;
        const double fhi = real_discriminant(j, hi) - target;
        if (flo == 0.0) {
            roots.push_back(lo);
            continue;
        }
        if (fhi == 0.0) {
            roots.push_back(hi);
            continue;
        }
        if ((flo > 0.0) == (fhi > 0.0))
            throw DegeneracyError(fmt::format("no sign change of Δ - {} around x = {}", target, x));
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (!(mid > lo && mid < hi)) break;
            const double fm = real_discriminant(j, mid) - target;
            if (fm == 0.0) {
                lo = hi = mid;
                break;
            }
            if ((fm > 0.0) == (flo > 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        roots.push_back(0.5 * (lo + hi));
    }
    return roots;
}

}  // namespace

Mat2 monodromy(const PeriodicJacobi& j, cplx z) {
    Mat2 m{{{1.0, 0.0}, {0.0, 1.0}}};
    for (int n = 0; n < j.period(); ++n) {
        const double an = j.a(n);
        const Mat2 t{{{(z - j.b(n)) / an, -j.a(n - 1) / an}, {1.0, 0.0}}};
        m = multiply(t, m);
    }
    return m;
}

cplx discriminant(const PeriodicJacobi& j, cplx z) {
    const Mat2 m = monodromy(j, z);
    return m[0][0] + m[1][1];
}

FiniteGapSet spectrum(const PeriodicJacobi& j) {
    std::vector<double> x = edge_roots(j, 2.0);
    const std::vector<double> y = edge_roots(j, -2.0);
    x.insert(x.end(), y.begin(), y.end());
    std::sort(x.begin(), x.end());

    double scale = 1.0;
    for (double v : x) scale = std::max(scale, std::abs(v));
    std::vector<Band> bands;
    for (std::size_t k = 0; k + 1 < x.size(); k += 2) {
        if (k > 0 && x[k] - x[k - 1] < 1e-10 * scale)
            throw DegeneracyError(fmt::format("closed gap at x = {}", x[k]));
        bands.push_back({x[k], x[k + 1]});
        if (std::abs(real_discriminant(j, bands.back().mid())) > 2.0)
            throw NumericError("spectrum: band edges are inconsistent with the discriminant");
    }
    return FiniteGapSet(std::move(bands));
}

FloquetData floquet(const PeriodicJacobi& j, cplx z) {
    FloquetData f{};
    f.monodromy = monodromy(j, z);
    f.discriminant = f.monodromy[0][0] + f.monodromy[1][1];
    if (z.imag() == 0.0) {
        const double d = std::abs(f.discriminant.real());
        if (d == 2.0)
            throw DegeneracyError(fmt::format("|Δ(z)| = 2 at z = {} (band edge)", z.real()));
        if (d < 2.0) throw DomainError(fmt::format("z = {} lies on the spectrum", z.real()));
    }
    const cplx sq = std::sqrt(f.discriminant * f.discriminant - 4.0);
    const cplx r1 = 0.5 * (f.discriminant + sq);
    const cplx r2 = 0.5 * (f.discriminant - sq);
    const cplx big = std::abs(r1) >= std::abs(r2) ? r1 : r2;
    f.rho_minus = big;
    f.rho_plus = 1.0 / big;
    f.seed_plus = eigenvector(f.monodromy, f.rho_plus);
    f.seed_minus = eigenvector(f.monodromy, f.rho_minus);
    return f;
}

FloquetResolvent::FloquetResolvent(const PeriodicJacobi& j, cplx z)
    : q_(j.period()), z_(z), data_(floquet(j, z)) {
    tabulate(j);
}

FloquetResolvent::FloquetResolvent(const PeriodicJacobi& j, cplx z, const FloquetData& data)
    : q_(j.period()), z_(z), data_(data) {
    tabulate(j);
}

void FloquetResolvent::tabulate(const PeriodicJacobi& j) {
    const int q = j.period();
    auto run = [&](const std::array<cplx, 2>& seed) {
        std::vector<cplx> u(static_cast<std::size_t>(q) + 2);
        u[0] = seed[1];  // u_{-1}
        u[1] = seed[0];  // u_0
        for (int n = 0; n < q; ++n) {
            const auto i = static_cast<std::size_t>(n + 1);
            u[i + 1] = ((z_ - j.b(n)) * u[i] - j.a(n - 1) * u[i - 1]) / j.a(n);
        }
        return u;
    };
    u_plus_ = run(data_.seed_plus);
    u_minus_ = run(data_.seed_minus);
    wronskian_ = j.a(0) * (u_minus_[1] * u_plus_[2] - u_minus_[2] * u_plus_[1]);
    if (wronskian_ == cplx(0.0)) throw DegeneracyError("vanishing Wronskian of Floquet solutions");
}

cplx FloquetResolvent::operator()(long n, long m) const {
    const long q = q_;
    const long lo = std::min(n, m);
    const long hi = std::max(n, m);
    auto split = [q](long k) {
        long block = k / q;
        long r = k % q;
        if (r < 0) {
            r += q;
            --block;
        }
        return std::pair{block, r};
    };
    const auto [k_lo, r_lo] = split(lo);
    const auto [k_hi, r_hi] = split(hi);
    // u−(lo) u+(hi) = ρ−^{k_lo} ρ+^{k_hi} v_{r_lo} u_{r_hi} = ρ+^{k_hi - k_lo} v u
    const cplx decay = std::pow(data_.rho_plus, static_cast<double>(k_hi - k_lo));
    return decay * u_minus_[static_cast<std::size_t>(r_lo + 1)] *
           u_plus_[static_cast<std::size_t>(r_hi + 1)] / wronskian_;
}

cplx green(const PeriodicJacobi& j, long n, long m, cplx z) { return FloquetResolvent(j, z)(n, m); }

cplx boundary_green(const PeriodicJacobi& j, long n, double t) {
    FloquetData f{};
    f.monodromy = monodromy(j, t);
    f.discriminant = f.monodromy[0][0] + f.monodromy[1][1];
    const double d = f.discriminant.real();
    if (!(std::abs(d) < 2.0))
        throw DomainError(fmt::format("boundary value requested at t = {} outside band interiors", t));
    const double s = std::sqrt(4.0 - d * d);
    // The two multipliers are conjugate and give conjugate kernels; the
    // boundary value from above is the one with Im G >= 0.
    f.rho_plus = cplx(0.5 * d, 0.5 * s);
    f.rho_minus = std::conj(f.rho_plus);
    f.seed_plus = eigenvector(f.monodromy, f.rho_plus);
    f.seed_minus = eigenvector(f.monodromy, f.rho_minus);
    const cplx g = FloquetResolvent(j, t, f)(n, n);
    return g.imag() >= 0.0 ? g : std::conj(g);
}

namespace {

// Im G(n, n; t + i0) · sqrt((t - lo)(hi - t)) on a band [lo, hi].
//
// With ρ± = Δ/2 ± iσ, σ = sqrt(4 - Δ²)/2, the Floquet solutions split as
// u± = A ± iσB with real A, B, so G(n, n) = (A² + σ²B²) / (2iσ W(A, B)).
// Writing 4 - Δ² = Π_k |t - e_k| / (Π a)² over all band edges cancels the
// inverse square root at lo and hi exactly.
class WeightedDensity {
  public:
    WeightedDensity(const PeriodicJacobi& j, const FiniteGapSet& e) : j_(j), edges_(e.edges()) {
        for (int n = 0; n < j.period(); ++n) prod_a_ *= j.a(n);
    }

    double operator()(long n, double t, const Band& band) const {
        double others = 1.0;
        double all = 1.0;
        for (double x : edges_) {
            const double d = std::abs(t - x);
            all *= d;
            if (x != band.lo && x != band.hi) others *= d;
        }
        const double sigma2 = all / (4.0 * prod_a_ * prod_a_);
        const Mat2 m = monodromy(j_, t);
        const double m00 = m[0][0].real(), m01 = m[0][1].real();
        const double m10 = m[1][0].real(), m11 = m[1][1].real();
        // seeds (u_0, u_{-1}) of A and B
        const bool first = std::abs(m01) >= std::abs(m10);
        const double a0 = first ? m01 : 0.5 * (m00 - m11);
        const double am1 = first ? 0.5 * (m11 - m00) : m10;
        const double b0 = first ? 0.0 : 1.0;
        const double bm1 = first ? 1.0 : 0.0;
        const double wr = std::abs(j_.a(-1) * (am1 * b0 - a0 * bm1));
        const long q = j_.period();
        const long r = ((n % q) + q) % q;
        double ap = am1, ac = a0, bp = bm1, bc = b0;
        for (long k = 0; k < r; ++k) {
            const double an = ((t - j_.b(k)) * ac - j_.a(k - 1) * ap) / j_.a(k);
            const double bn = ((t - j_.b(k)) * bc - j_.a(k - 1) * bp) / j_.a(k);
            ap = ac;
            ac = an;
            bp = bc;
            bc = bn;
        }
        return prod_a_ * (ac * ac + sigma2 * bc * bc) / (wr * std::sqrt(others));
    }

  private:
    const PeriodicJacobi& j_;
    std::vector<double> edges_;
    double prod_a_ = 1.0;
};

template <class Weight>
double diagonal_measure_integral(const PeriodicJacobi& j, long n, Weight&& weight,
                                 const FiniteGapSet& e, const QuadratureOptions& opts,
                                 cplx z_for_nodes, bool has_z) {
    const WeightedDensity density(j, e);
    double total = 0.0;
    for (const auto& band : e.bands()) {
        const auto local = has_z ? resolving(opts, band, band.distance(z_for_nodes)) : opts;
        total += chebyshev_band_integral(
            band, [&](double t) { return density(n, t, band) * weight(t); }, local);
    }
    return total / std::numbers::pi;
}

}  // namespace

double abs_resolvent_moment(const PeriodicJacobi& j, long n, cplx z, const QuadratureOptions& opts) {
    const FiniteGapSet e = spectrum(j);
    if (e.contains(z)) throw DomainError("|J - z|^{-1} moment requested on the spectrum");
    return diagonal_measure_integral(
        j, n, [z](double t) { return 1.0 / std::abs(t - z); }, e, opts, z, true);
}

double spectral_mass(const PeriodicJacobi& j, long n, const QuadratureOptions& opts) {
    const FiniteGapSet e = spectrum(j);
    return diagonal_measure_integral(j, n, [](double) { return 1.0; }, e, opts, 0.0, false);
}

}  // namespace jlt
