#include "jlt/io.hpp"

#include <sstream>

#include <catch_amalgamated.hpp>

#include "jlt/errors.hpp"
#include "jlt/exit_codes.hpp"

using namespace jlt;
using io::json;

TEST_CASE("json round trips") {
    const FiniteGapSet e({{-3.0, -1.0}, {1.0, 3.0}});
    CHECK(io::gap_set_from_json(io::to_json(e)) == e);
    CHECK(io::to_json(e).dump() == R"({"bands":[[-3.0,-1.0],[1.0,3.0]]})");

    const ReflectionlessMeasure mu(FiniteGapSet({{-2.0, -1.0}, {1.0, 2.0}}), {0.25});
    const auto mu2 = io::measure_from_json(io::to_json(mu));
    CHECK(mu2.set() == mu.set());
    CHECK(mu2.gammas() == mu.gammas());

    const PeriodicJacobi j({1.0, 2.0}, {0.5, -0.5});
    const auto j2 = io::background_from_json(io::to_json(j));
    CHECK(j2.period() == 2);
    CHECK(j2.a(1) == 2.0);
    CHECK(j2.b(1) == -0.5);

    const Perturbation dj(-1, {cplx(0.4, 0.3), 0.0}, {cplx(0.0, 1.2), 0.8}, {0.1, cplx(0.6, 0.6)});
    const auto dj2 = io::perturbation_from_json(io::to_json(dj));
    CHECK(dj2.n0() == -1);
    CHECK(dj2.da() == dj.da());
    CHECK(dj2.db() == dj.db());
    CHECK(dj2.dc() == dj.dc());

    const auto spec = InequalitySpec::make(InequalityKind::LT_NSA, 1.5, 0.2);
    const auto spec2 = io::spec_from_json(io::to_json(spec));
    CHECK(spec2.kind == spec.kind);
    CHECK(spec2.p == spec.p);
    CHECK(spec2.eps == spec.eps);
    CHECK_FALSE(spec2.exploratory);
    CHECK(io::spec_from_json(json{{"kind", "LT_NSA"}, {"p", 1}, {"eps", 0}}).exploratory);
}

TEST_CASE("lenient and strict input forms") {
    const auto dj = io::perturbation_from_json(json::parse(R"({"n0": 2, "db": [1.5, [0, 3]]})"));
    CHECK(dj.db()[0] == cplx(1.5));
    CHECK(dj.db()[1] == cplx(0.0, 3.0));
    CHECK(dj.da() == std::vector<cplx>(2, 0.0));

    CHECK_THROWS_AS(io::gap_set_from_json(json::parse(R"({"bands": [[1, 0]]})")), UsageError);
    CHECK_THROWS_AS(io::gap_set_from_json(json::parse(R"({"band": []})")), UsageError);
    CHECK_THROWS_AS(io::background_from_json(json::parse(R"({"period": 3, "a": [1], "b": [0]})")), UsageError);
    CHECK_THROWS_AS(io::background_from_json(json::parse(R"({"a": [1, -1], "b": [0, 0]})")), UsageError);
    CHECK_THROWS_AS(io::perturbation_from_json(json::parse(R"({"n0": 0.5, "db": [1]})")), UsageError);
    CHECK_THROWS_AS(io::perturbation_from_json(json::parse(R"({"n0": 0, "db": [[1, 2, 3]]})")), UsageError);
    CHECK_THROWS_AS(io::spec_from_json(json::parse(R"({"kind": "lt", "p": 1})")), UsageError);
    CHECK_THROWS_AS(io::spec_from_json(json::parse(R"({"kind": "kato-nsa", "p": 1})")), UsageError);
}

TEST_CASE("eigenvalue csv round trip is exact") {
    const FiniteGapSet e({{-2.0, 2.0}});
    const std::vector<EigenvalueRecord> evs = {
        {{2.5, 0.0}, 1, Method::determinant, 1e-17},
        {{0.1, 1.0 / 3.0}, 2, Method::truncation, 3.3e-9},
        {{-2.000000001, -1e-300}, 1, Method::determinant, 0.0},
    };
    std::stringstream s;
    io::write_eigenvalue_csv(s, evs, e);
    const std::string text = s.str();
    CHECK(text.rfind("re,im,multiplicity,method,residual,dist_E,dist_edges\n", 0) == 0);
    const auto back = io::read_eigenvalue_csv(s);
    REQUIRE(back.size() == evs.size());
    for (std::size_t i = 0; i < evs.size(); ++i) {
        CHECK(back[i].z == evs[i].z);
        CHECK(back[i].multiplicity == evs[i].multiplicity);
        CHECK(back[i].method == evs[i].method);
        CHECK(back[i].residual == evs[i].residual);
    }

    std::stringstream bad("re,im\n1,2\n");
    CHECK_THROWS_AS(io::read_eigenvalue_csv(bad), UsageError);
    std::stringstream garbled("re,im,multiplicity,method,residual,dist_E,dist_edges\nx,0,1,determinant,0,0,0\n");
    CHECK_THROWS_AS(io::read_eigenvalue_csv(garbled), UsageError);
}

TEST_CASE("report json carries both sides") {
    const FiniteGapSet e({{-2.0, 2.0}});
    const auto r = bound_report(e, Perturbation::diagonal_site(0, 1.5), InequalitySpec::make(InequalityKind::KATO_NSA, 2.0),
                                {{{2.5, 0.0}, 1}}, 1e-10);
    const json j = io::to_json(r, e);
    CHECK(j["spec"] == "kato-nsa");
    CHECK(j["lhs"].get<double>() == r.lhs);
    CHECK(j["rhs"].get<double>() == 2.25);
    CHECK(j["ratio"].get<double>() == r.ratio);
    CHECK(j["eigenvalues"].size() == 1);
    CHECK(j["eigenvalues"][0]["dist_E"].get<double>() == 0.5);
    CHECK(json::parse(j.dump()) == j);
}

TEST_CASE("svg scatter") {
    const FiniteGapSet e({{-3.0, -1.0}, {1.0, 3.0}});
    const std::string svg = io::eigenvalue_svg({{{0.0, 1.0}, 1}, {{4.0, 0.0}, 2, Method::truncation}}, e, "t");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    std::size_t circles = 0;
    for (std::size_t pos = 0; (pos = svg.find("<circle", pos)) != std::string::npos; ++pos) ++circles;
    CHECK(circles == 2);
    CHECK(svg == io::eigenvalue_svg({{{0.0, 1.0}, 1}, {{4.0, 0.0}, 2, Method::truncation}}, e, "t"));
}

TEST_CASE("exit codes") {
    CHECK(exit_code(UsageError("x")) == 2);
    CHECK(exit_code(DomainError("x")) == 3);
    CHECK(exit_code(DegeneracyError("x")) == 3);
    CHECK(exit_code(NumericError("x")) == 3);
    CHECK(exit_code(ContourError("x", 0.0, 1.0)) == 4);
}
