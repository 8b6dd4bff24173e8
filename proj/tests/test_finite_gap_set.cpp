#include "jlt/finite_gap_set.hpp"

#include <cmath>
#include <random>

#include <catch_amalgamated.hpp>

#include "jlt/errors.hpp"

using namespace jlt;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
const FiniteGapSet kFree({{-2.0, 2.0}});
const FiniteGapSet kTwoBand({{-2.0, -1.0}, {1.0, 2.0}});
}  // namespace

TEST_CASE("distances to the set and to its endpoints", "[finite_gap_set]") {
    CHECK(dist_to_set({3.0, 0.0}, kFree) == 1.0);
    CHECK(dist_to_set({0.0, 4.0}, kFree) == 4.0);
    CHECK(dist_to_set({0.0, 0.0}, kTwoBand) == 1.0);

    CHECK(dist_to_edges({0.0, 0.0}, kFree) == 2.0);
    CHECK(dist_to_edges({2.5, 0.0}, kTwoBand) == 0.5);
    CHECK_THAT(dist_to_edges({1.0, 1.0}, kFree), WithinAbs(std::sqrt(2.0), 1e-15));
}

TEST_CASE("construction rejects touching, reversed and empty band lists", "[finite_gap_set]") {
    CHECK_THROWS_AS(FiniteGapSet({}), UsageError);
    CHECK_THROWS_AS(FiniteGapSet({{1.0, 1.0}}), UsageError);
    CHECK_THROWS_AS(FiniteGapSet({{2.0, 1.0}}), UsageError);
    CHECK_THROWS_AS(FiniteGapSet({{-2.0, 0.0}, {0.0, 2.0}}), UsageError);
    CHECK_THROWS_AS(FiniteGapSet({{0.0, 1.0}, {-2.0, -1.0}}), UsageError);

    const auto edges = kTwoBand.edges();
    REQUIRE(edges.size() == 4);
    CHECK(edges[0] == -2.0);
    CHECK(edges[1] == -1.0);
    CHECK(edges[2] == 1.0);
    CHECK(edges[3] == 2.0);
}

TEST_CASE("eigenvalue weights", "[finite_gap_set]") {
    const cplx z{2.5, 0.0};
    const double lt = eigenvalue_weight(z, kFree, InequalitySpec::make(InequalityKind::LT_NSA, 1.0, 0.1));
    CHECK_THAT(lt, WithinRel(std::pow(0.5, 1.1) * std::pow(3.5, 0.35) / std::sqrt(0.5), 1e-14));
    CHECK_THAT(lt, WithinAbs(1.0229, 1e-3));

    CHECK_THAT(eigenvalue_weight(z, kFree, InequalitySpec::make(InequalityKind::KATO_NSA, 2.0)),
               WithinAbs(0.25, 1e-15));
    CHECK_THAT(eigenvalue_weight(z, kFree, InequalitySpec::make(InequalityKind::ULTIMATE_SA, 1.0)),
               WithinAbs(1.3228756555322954, 1e-14));
    CHECK_THAT(eigenvalue_weight(z, kFree, InequalitySpec::make(InequalityKind::LT_SA, 1.0)),
               WithinAbs(std::sqrt(0.5), 1e-15));
    CHECK_THAT(eigenvalue_weight(z, kFree, InequalitySpec::make(InequalityKind::LT0_NSA, 1.0, 0.5)),
               WithinAbs(std::pow(0.5, 1.5) / std::sqrt(2.25), 1e-15));
}

TEST_CASE("eigenvalue weight error paths", "[finite_gap_set]") {
    const auto lt0 = InequalitySpec::make(InequalityKind::LT0_NSA, 1.0, 0.1);
    CHECK_THROWS_AS(eigenvalue_weight({0.0, 1.0}, kTwoBand, lt0), UsageError);
    CHECK_THROWS_AS(eigenvalue_weight({2.0, 0.0}, kFree, lt0), DomainError);
    CHECK_THROWS_AS(eigenvalue_weight({0.5, 0.0}, kFree,
                                      InequalitySpec::make(InequalityKind::KATO_NSA, 2.0)),
                    DomainError);

    CHECK_THROWS_AS(InequalitySpec::make(InequalityKind::LT_NSA, 1.0, 0.0), UsageError);
    CHECK_THROWS_AS(InequalitySpec::make(InequalityKind::LT_NSA, 0.5, 0.1), UsageError);
    CHECK_THROWS_AS(InequalitySpec::make(InequalityKind::KATO_NSA, 1.0), UsageError);
    const auto open = InequalitySpec::explore(InequalityKind::LT_NSA, 1.0, 0.0);
    CHECK(open.exploratory);
    CHECK(std::isfinite(eigenvalue_weight({2.5, 0.0}, kFree, open)));
    // eps is ignored for the Kato kinds, including eps = 0
    CHECK(eigenvalue_weight({3.0, 0.0}, kFree, InequalitySpec::make(InequalityKind::KATO_SA, 1.0)) ==
          1.0);

    CHECK(inequality_kind_from_string("LT_NSA") == InequalityKind::LT_NSA);
    CHECK(inequality_kind_from_string("kato-sa") == InequalityKind::KATO_SA);
    CHECK_THROWS_AS(inequality_kind_from_string("nope"), UsageError);
}

TEST_CASE("distances are 1-Lipschitz and vanish on the bands", "[finite_gap_set][property]") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    std::uniform_real_distribution<double> small(-0.3, 0.3);
    for (int i = 0; i < 10000; ++i) {
        const cplx z(u(rng), u(rng));
        const cplx h(small(rng), small(rng));
        const double lip = std::abs(h) * (1.0 + 1e-12) + 1e-15;
        CHECK(std::abs(dist_to_set(z, kTwoBand) - dist_to_set(z + h, kTwoBand)) <= lip);
        CHECK(std::abs(dist_to_edges(z, kTwoBand) - dist_to_edges(z + h, kTwoBand)) <= lip);
    }
    std::uniform_real_distribution<double> band(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double t = band(rng);
        const double x = (i % 2 == 0) ? -2.0 + t : 1.0 + t;
        CHECK(dist_to_set({x, 0.0}, kTwoBand) == 0.0);
    }
}

TEST_CASE("nearest endpoint dominates the set distance there", "[finite_gap_set][property]") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int i = 0; i < 1000; ++i) {
        const cplx z(u(rng), u(rng));
        // the nearest point of E is an endpoint when Re z lies outside every band interior
        if (kTwoBand.interior_band(z.real()) >= 0) continue;
        CHECK_THAT(dist_to_edges(z, kTwoBand), WithinRel(dist_to_set(z, kTwoBand), 1e-14));
    }
}

TEST_CASE("LT-NSA weight grows along rays normal to a band", "[finite_gap_set][property]") {
    const auto spec = InequalitySpec::make(InequalityKind::LT_NSA, 1.5, 0.2);
    for (double x : {-1.5, 0.0, 0.7}) {
        double last = 0.0;
        for (double y = 1e-3; y < 100.0; y *= 2.0) {
            const double w = eigenvalue_weight({x, y}, kFree, spec);
            CHECK(w > last);
            last = w;
        }
    }
    double last = 0.0;
    for (double d = 1e-4; d < 100.0; d *= 2.0) {
        const double w = eigenvalue_weight({2.0 + d, 0.0}, kFree, spec);
        CHECK(w > last);
        last = w;
    }
}

TEST_CASE("LT-NSA weight matches its defining expression", "[finite_gap_set][property]") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-6.0, 6.0);
    const FiniteGapSet e({{-3.0, -1.0}, {0.5, 1.0}, {2.0, 4.0}});
    for (int i = 0; i < 1000; ++i) {
        const cplx z(u(rng), u(rng));
        const double p = 1.0 + 0.25 * (i % 8);
        const double eps = 0.05 + 0.1 * (i % 5);
        const double w = eigenvalue_weight(z, e, InequalitySpec::make(InequalityKind::LT_NSA, p, eps));
        const double closure = w * std::sqrt(dist_to_edges(z, e)) /
                               (std::pow(dist_to_set(z, e), p + eps) *
                                std::pow(1.0 + std::abs(z), 0.5 * (1.0 - 3.0 * eps)));
        CHECK_THAT(closure, WithinAbs(1.0, 1e-13));
    }
}
