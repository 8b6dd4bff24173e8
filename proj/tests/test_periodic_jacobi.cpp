#include "jlt/periodic_jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <catch_amalgamated.hpp>

#include "jlt/errors.hpp"
#include "jlt/linalg.hpp"

using namespace jlt;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const PeriodicJacobi kFree = PeriodicJacobi::free();
const PeriodicJacobi kSsh({1.0, 2.0}, {0.0, 0.0});
const PeriodicJacobi kStaggered({1.0, 1.0}, {1.0, -1.0});

std::vector<PeriodicJacobi> test_matrices() {
    return {kFree, kSsh, kStaggered, PeriodicJacobi({1.0, 0.5, 1.5}, {0.3, -0.2, 0.0}),
            PeriodicJacobi({0.7, 1.2, 1.0, 0.9}, {0.0, 0.5, -0.5, 0.2})};
}

// Eigenvalues of the real symmetric truncation to sites [-m, m].
std::vector<double> truncation(const PeriodicJacobi& j, long m) {
    Tridiagonal t;
    for (long n = -m; n <= m; ++n) t.diag.push_back(j.b(n));
    for (long n = -m; n < m; ++n) {
        t.sub.push_back(j.a(n));
        t.super.push_back(j.a(n));
    }
    std::vector<double> out;
    for (cplx x : tridiagonal_eigenvalues(t)) out.push_back(x.real());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("discriminant examples", "[periodic]") {
    CHECK(std::abs(discriminant(kFree, {0.7, 0.2}) - cplx(0.7, 0.2)) < 1e-15);
    for (double z : {0.0, 1.0, 2.5}) {
        CHECK_THAT(discriminant(kSsh, z).real(), WithinAbs((z * z - 5.0) / 2.0, 1e-14));
        CHECK_THAT(discriminant(kStaggered, z).real(), WithinAbs(z * z - 3.0, 1e-14));
    }
    CHECK_THROWS_AS(PeriodicJacobi({1.0, 0.0}, {0.0, 0.0}), UsageError);
    CHECK_THROWS_AS(PeriodicJacobi({1.0}, {0.0, 0.0}), UsageError);
    CHECK_THROWS_AS(PeriodicJacobi({}, {}), UsageError);
}

TEST_CASE("spectrum examples", "[periodic]") {
    const auto free_bands = spectrum(kFree).bands();
    REQUIRE(free_bands.size() == 1);
    CHECK_THAT(free_bands[0].lo, WithinAbs(-2.0, 1e-12));
    CHECK_THAT(free_bands[0].hi, WithinAbs(2.0, 1e-12));

    auto check = [](const PeriodicJacobi& j, std::vector<Band> expect) {
        const auto bands = spectrum(j).bands();
        REQUIRE(bands.size() == expect.size());
        for (std::size_t k = 0; k < bands.size(); ++k) {
            CHECK_THAT(bands[k].lo, WithinAbs(expect[k].lo, 1e-12));
            CHECK_THAT(bands[k].hi, WithinAbs(expect[k].hi, 1e-12));
        }
    };
    // Δ for a = (1, 2) is (z² − 5)/2 with this normalization; edges at z² ∈ {1, 9}
    check(kSsh, {{-3.0, -1.0}, {1.0, 3.0}});
    check(kStaggered, {{-std::sqrt(5.0), -1.0}, {1.0, std::sqrt(5.0)}});

    CHECK_THROWS_AS(spectrum(PeriodicJacobi({1.0, 1.0}, {0.0, 0.0})), DegeneracyError);
}

TEST_CASE("band edges satisfy |Δ| = 2", "[periodic][property]") {
    for (const auto& j : test_matrices()) {
        const FiniteGapSet e = spectrum(j);
        for (double x : e.edges()) CHECK_THAT(std::abs(discriminant(j, x).real()), WithinAbs(2.0, 1e-10));
    }
}

TEST_CASE("truncations fill the spectrum", "[periodic][oracle]") {
    for (const auto& j : {kFree, kSsh, kStaggered}) {
        const FiniteGapSet e = spectrum(j);
        const auto ev = truncation(j, 1000);
        // eigenvalue -> E; an odd-length truncation may carry boundary states in gaps
        std::size_t outside = 0;
        for (double x : ev)
            if (dist_to_set(x, e) > 1e-2) ++outside;
        CHECK(outside <= 2);
        // E -> eigenvalues
        double worst = 0.0;
        for (const auto& band : e.bands()) {
            for (int i = 0; i <= 400; ++i) {
                const double t = band.lo + (band.hi - band.lo) * i / 400.0;
                const auto it = std::lower_bound(ev.begin(), ev.end(), t);
                double best = INFINITY;
                if (it != ev.end()) best = *it - t;
                if (it != ev.begin()) best = std::min(best, t - *(it - 1));
                worst = std::max(worst, best);
            }
        }
        CHECK(worst <= 1e-2);
    }
}

TEST_CASE("Green function examples and errors", "[periodic]") {
    CHECK_THAT(green(kFree, 0, 0, 3.0).real(), WithinAbs(-1.0 / std::sqrt(5.0), 1e-14));
    const double rho = (3.0 - std::sqrt(5.0)) / 2.0;
    CHECK_THAT(green(kFree, 0, 1, 3.0).real(), WithinAbs(-rho / std::sqrt(5.0), 1e-14));
    CHECK_THAT(green(kFree, -4, 3, 3.0).real(), WithinRel(-std::pow(rho, 7) / std::sqrt(5.0), 1e-12));
    CHECK_THROWS_AS(green(kFree, 0, 0, 1.0), DomainError);
    CHECK_THROWS_AS(green(kFree, 0, 0, 2.0), DegeneracyError);
    CHECK_THROWS_AS(green(kSsh, 0, 0, 1.0), DegeneracyError);
    CHECK_NOTHROW(green(kSsh, 0, 0, 0.0));
}

TEST_CASE("Green function solves the resolvent equation", "[periodic][property]") {
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<long> site(-7, 7);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    const auto mats = test_matrices();
    int checked = 0;
    while (checked < 100) {
        const auto& j = mats[static_cast<std::size_t>(checked) % mats.size()];
        const cplx z(u(rng), u(rng) * 0.5);
        if (spectrum(j).contains(z)) continue;
        const FloquetResolvent g(j, z);
        const long n = site(rng), m = site(rng);
        const cplx lhs = j.a(n - 1) * g(n - 1, m) + (j.b(n) - z) * g(n, m) + j.a(n) * g(n + 1, m);
        CHECK(std::abs(lhs - (n == m ? 1.0 : 0.0)) < 1e-10);
        CHECK(std::abs(g(n, m) - g(m, n)) < 1e-12);
        ++checked;
    }
}

TEST_CASE("Herglotz sign of the diagonal", "[periodic][property]") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    const auto mats = test_matrices();
    for (int i = 0; i < 10000; ++i) {
        const auto& j = mats[static_cast<std::size_t>(i) % mats.size()];
        const cplx z(u(rng), std::abs(u(rng)) + 1e-6);
        const FloquetResolvent g(j, z);
        for (long n = 0; n < j.period(); ++n) CHECK(g(n, n).imag() > 0.0);
    }
}

TEST_CASE("diagonal Green function is reflectionless", "[periodic][property]") {
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> u01(0.02, 0.98);
    for (const auto& j : test_matrices()) {
        const auto bands = spectrum(j).bands();
        for (int i = 0; i < 100; ++i) {
            const auto& band = bands[static_cast<std::size_t>(i) % bands.size()];
            const double t = band.lo + u01(rng) * (band.hi - band.lo);
            for (long n = 0; n < j.period(); ++n) {
                CHECK(std::abs(green(j, n, n, {t, 1e-8}).real()) <= 1e-4);
                const cplx b = boundary_green(j, n, t);
                CHECK(b.imag() > 0.0);
                CHECK(std::abs(b - green(j, n, n, {t, 1e-8})) < 1e-5);
            }
        }
    }
}

TEST_CASE("diagonal spectral measures are probabilities", "[periodic][property]") {
    for (const auto& j : test_matrices())
        for (long n = 0; n < j.period(); ++n) CHECK_THAT(spectral_mass(j, n), WithinAbs(1.0, 1e-8));
}

TEST_CASE("absolute resolvent moments", "[periodic]") {
    CHECK_THAT(abs_resolvent_moment(kFree, 0, 3.0), WithinAbs(1.0 / std::sqrt(5.0), 1e-10));
    CHECK_THAT(abs_resolvent_moment(kFree, 0, {0.0, 1.0}), WithinAbs(0.6426376817731252, 1e-10));
    for (long n : {-3L, 1L, 17L})
        CHECK_THAT(abs_resolvent_moment(kFree, n, {0.5, 0.3}),
                   WithinRel(abs_resolvent_moment(kFree, 0, {0.5, 0.3}), 1e-10));
    CHECK_THROWS_AS(abs_resolvent_moment(kFree, 0, 0.5), DomainError);
}

TEST_CASE("absolute resolvent moment against a truncation", "[periodic][oracle]") {
    // free truncation on N = 2M + 1 sites: λ_k = 2cos(kπ/(N+1)), v_k(j) = sqrt(2/(N+1)) sin(jkπ/(N+1));
    // <δ0, |J_M - i|^{-1} δ0> = Σ_k v_k(M+1)² / |λ_k - i|
    const long m = 2000;
    const double np1 = static_cast<double>(2 * m + 2);
    double sum = 0.0;
    for (long k = 1; k <= 2 * m + 1; ++k) {
        const double th = static_cast<double>(k) * std::numbers::pi / np1;
        const double v = std::sin(static_cast<double>(m + 1) * th);
        sum += 2.0 / np1 * v * v / std::abs(cplx(2.0 * std::cos(th), -1.0));
    }
    CHECK_THAT(abs_resolvent_moment(kFree, 0, {0.0, 1.0}), WithinAbs(sum, 1e-4));
}
