#include "jlt/io.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "jlt/errors.hpp"

namespace jlt::io {

namespace {

const json& field(const json& j, const char* name, const char* what) {
    if (!j.is_object()) throw UsageError(fmt::format("{} must be a JSON object", what));
    const auto it = j.find(name);
    if (it == j.end()) throw UsageError(fmt::format("{} is missing \"{}\"", what, name));
    return *it;
}

double number(const json& j, const char* what) {
    if (!j.is_number()) throw UsageError(fmt::format("{} must be a number", what));
    return j.get<double>();
}

std::vector<double> numbers(const json& j, const char* what) {
    if (!j.is_array()) throw UsageError(fmt::format("{} must be an array of numbers", what));
    std::vector<double> out;
    for (const auto& x : j) out.push_back(number(x, what));
    return out;
}

std::vector<cplx> complexes(const json& j, const char* what) {
    if (!j.is_array()) throw UsageError(fmt::format("{} must be an array of complex numbers", what));
    std::vector<cplx> out;
    for (const auto& x : j) out.push_back(complex_from_json(x));
    return out;
}

std::string real(double x) { return fmt::format("{:.17g}", x); }

}  // namespace

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw UsageError(fmt::format("expected a complex number [re, im], got {}", j.dump()));
}

json to_json(const FiniteGapSet& e) {
    json bands = json::array();
    for (const auto& b : e.bands()) bands.push_back(json::array({b.lo, b.hi}));
    return {{"bands", bands}};
}

FiniteGapSet gap_set_from_json(const json& j) {
    const json& bands = field(j, "bands", "finite gap set");
    if (!bands.is_array()) throw UsageError("\"bands\" must be an array of [lo, hi] pairs");
    std::vector<Band> out;
    for (const auto& b : bands) {
        const auto v = numbers(b, "band endpoint");
        if (v.size() != 2) throw UsageError("each band must be a [lo, hi] pair");
        out.push_back({v[0], v[1]});
    }
    return FiniteGapSet(out);
}

json to_json(const ReflectionlessMeasure& mu) {
    json out = to_json(mu.set());
    out["gammas"] = mu.gammas();
    return out;
}

ReflectionlessMeasure measure_from_json(const json& j) {
    std::vector<double> gammas;
    if (j.is_object() && j.contains("gammas")) gammas = numbers(j["gammas"], "gammas");
    return ReflectionlessMeasure(gap_set_from_json(j), gammas);
}

json to_json(const PeriodicJacobi& j) {
    std::vector<double> a, b;
    for (long n = 0; n < j.period(); ++n) {
        a.push_back(j.a(n));
        b.push_back(j.b(n));
    }
    return {{"period", j.period()}, {"a", a}, {"b", b}};
}

PeriodicJacobi background_from_json(const json& j) {
    auto a = numbers(field(j, "a", "background"), "background a");
    auto b = numbers(field(j, "b", "background"), "background b");
    if (j.contains("period")) {
        const json& q = j["period"];
        if (!q.is_number_integer() || q.get<long>() != static_cast<long>(a.size()))
            throw UsageError("background \"period\" must equal the length of \"a\"");
    }
    return PeriodicJacobi(std::move(a), std::move(b));
}

json to_json(const Perturbation& dj) {
    auto arr = [](const std::vector<cplx>& v) {
        json out = json::array();
        for (cplx x : v) out.push_back(to_json(x));
        return out;
    };
    return {{"n0", dj.n0()}, {"da", arr(dj.da())}, {"db", arr(dj.db())}, {"dc", arr(dj.dc())}};
}

Perturbation perturbation_from_json(const json& j) {
    const json& n0 = field(j, "n0", "perturbation");
    if (!n0.is_number_integer()) throw UsageError("perturbation \"n0\" must be an integer");
    auto db = complexes(field(j, "db", "perturbation"), "db");
    auto read = [&](const char* name) {
        return j.contains(name) ? complexes(j[name], name) : std::vector<cplx>(db.size(), 0.0);
    };
    auto da = read("da");
    auto dc = read("dc");
    return Perturbation(n0.get<long>(), std::move(da), std::move(db), std::move(dc));
}

json to_json(const InequalitySpec& s) {
    return {{"kind", std::string(to_string(s.kind))}, {"p", s.p}, {"eps", s.eps}};
}

InequalitySpec spec_from_json(const json& j) {
    const json& kind = field(j, "kind", "inequality spec");
    if (!kind.is_string()) throw UsageError("inequality \"kind\" must be a string");
    const double p = number(field(j, "p", "inequality spec"), "p");
    const double eps = j.contains("eps") ? number(j["eps"], "eps") : 0.0;
    return InequalitySpec::explore(inequality_kind_from_string(kind.get<std::string>()), p, eps);
}

json to_json(const EigenvalueRecord& r, const FiniteGapSet& e) {
    return {{"re", r.z.real()},
            {"im", r.z.imag()},
            {"multiplicity", r.multiplicity},
            {"method", to_string(r.method)},
            {"residual", r.residual},
            {"dist_E", dist_to_set(r.z, e)},
            {"dist_edges", dist_to_edges(r.z, e)}};
}

json to_json(const BoundReport& r, const FiniteGapSet& e) {
    json evs = json::array();
    for (const auto& ev : r.eigenvalues) evs.push_back(to_json(ev, e));
    return {{"spec", std::string(to_string(r.spec.kind))},
            {"p", r.spec.p},
            {"eps", r.spec.eps},
            {"lhs", r.lhs},
            {"rhs", r.rhs_sum},
            {"ratio", r.ratio},
            {"eigenvalue_count", r.eigenvalue_count},
            {"unresolved_tube_radius", r.unresolved_tube_radius},
            {"exploratory", r.spec.exploratory},
            {"eigenvalues", evs}};
}

void write_eigenvalue_csv(std::ostream& out, const std::vector<EigenvalueRecord>& records,
                          const FiniteGapSet& e) {
    out << "re,im,multiplicity,method,residual,dist_E,dist_edges\n";
    for (const auto& r : records)
        out << real(r.z.real()) << ',' << real(r.z.imag()) << ',' << r.multiplicity << ',' << to_string(r.method)
            << ',' << real(r.residual) << ',' << real(dist_to_set(r.z, e)) << ','
            << real(dist_to_edges(r.z, e)) << '\n';
}

std::vector<EigenvalueRecord> read_eigenvalue_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "re,im,multiplicity,method,residual,dist_E,dist_edges")
        throw UsageError("eigenvalue CSV has an unexpected header");
    std::vector<EigenvalueRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
        if (cells.size() != 7) throw UsageError(fmt::format("eigenvalue CSV row has {} cells", cells.size()));
        try {
            EigenvalueRecord r;
            r.z = {std::stod(cells[0]), std::stod(cells[1])};
            r.multiplicity = std::stoi(cells[2]);
            if (cells[3] == "determinant") r.method = Method::determinant;
            else if (cells[3] == "truncation") r.method = Method::truncation;
            else throw UsageError(fmt::format("unknown method '{}'", cells[3]));
            r.residual = std::stod(cells[4]);
            out.push_back(r);
        } catch (const std::logic_error&) {
            throw UsageError(fmt::format("malformed eigenvalue CSV row '{}'", line));
        }
    }
    return out;
}

std::string eigenvalue_svg(const std::vector<EigenvalueRecord>& records, const FiniteGapSet& e,
                           const std::string& title) {
    double x0 = e.lower(), x1 = e.upper(), y = 0.0;
    for (const auto& r : records) {
        x0 = std::min(x0, r.z.real());
        x1 = std::max(x1, r.z.real());
        y = std::max(y, std::abs(r.z.imag()));
    }
    const double pad = 0.1 * std::max(x1 - x0, 1.0);
    x0 -= pad;
    x1 += pad;
    y = std::max(y + pad, 0.25 * (x1 - x0));
    const double w = 800.0, h = 800.0 * (2.0 * y) / (x1 - x0);
    auto px = [&](double x) { return (x - x0) / (x1 - x0) * w; };
    auto py = [&](double v) { return (y - v) / (2.0 * y) * h; };
    auto f = [](double v) { return fmt::format("{:.2f}", v); };

    std::string s = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
        f(w), f(h), f(w), f(h));
    s += fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", f(w), f(h));
    s += fmt::format("<line x1=\"0\" y1=\"{0}\" x2=\"{1}\" y2=\"{0}\" stroke=\"#bbb\" stroke-width=\"1\"/>\n",
                     f(py(0.0)), f(w));
    for (const auto& b : e.bands())
        s += fmt::format(
            "<line x1=\"{0}\" y1=\"{2}\" x2=\"{1}\" y2=\"{2}\" stroke=\"#1f5fa8\" stroke-width=\"5\"/>\n",
            f(px(b.lo)), f(px(b.hi)), f(py(0.0)));
    for (double x : e.edges())
        s += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#1f5fa8\" stroke-width=\"1.5\"/>\n",
                         f(px(x)), f(py(0.0) - 8.0), f(py(0.0) + 8.0));
    for (const auto& r : records) {
        const double radius = 3.0 + 1.5 * (r.multiplicity - 1);
        const char* colour = r.method == Method::determinant ? "#c0392b" : "#27ae60";
        s += fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>\n",
                         f(px(r.z.real())), f(py(r.z.imag())), f(radius), colour);
    }
    if (!title.empty())
        s += fmt::format("<text x=\"10\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">{}</text>\n", title);
    s += "</svg>\n";
    return s;
}

}  // namespace jlt::io
