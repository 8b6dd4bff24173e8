#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "jlt/determinant_eigensolver.hpp"
#include "jlt/errors.hpp"
#include "jlt/exit_codes.hpp"
#include "jlt/io.hpp"
#include "jlt/lt_bounds.hpp"
#include "jlt/periodic_jacobi.hpp"
#include "jlt/perturbation.hpp"
#include "jlt/reflectionless.hpp"
#include "jlt/zero_sums.hpp"

namespace fs = std::filesystem;
using namespace jlt;
using io::json;

namespace {

struct Flags {
    std::string config;
    std::string out_dir;
    std::string spec;
    std::optional<double> p;
    std::optional<double> eps;
    std::optional<double> contour_tol;
    std::optional<double> quad_tol;
    std::optional<long> truncation_m;
    std::optional<double> filter_dist;
    std::vector<std::string> formats;
    std::string method = "determinant";
};

struct Solver {
    long truncation_m = 500;
    double filter_dist = 0.05;
    double contour_tol = 1e-10;
    double quad_tol = 1e-10;
};

struct Config {
    json raw;
    std::optional<PeriodicJacobi> background;
    std::optional<Perturbation> perturbation;
    std::optional<ReflectionlessMeasure> measure;
    std::optional<InequalitySpec> spec;
    double p = 1.0;
    double eps = 0.1;
    Solver solver;
    fs::path dir = ".";
    std::set<std::string> formats = {"csv", "json"};
    std::vector<cplx> points;
    std::vector<double> t_grid;
    std::optional<DiskEnvelope> disk;
    std::vector<cplx> disk_zeros;
    std::optional<double> q, r;
};

double positive(const json& j, const char* name) {
    if (!j.is_number() || !(j.get<double>() > 0.0))
        throw UsageError(fmt::format("\"{}\" must be a positive number", name));
    return j.get<double>();
}

Config load(const std::string& command, const Flags& flags) {
    Config c;
    std::ifstream in(flags.config);
    if (!in) throw UsageError(fmt::format("cannot read config '{}'", flags.config));
    try {
        c.raw = json::parse(in);
    } catch (const json::parse_error& e) {
        throw UsageError(fmt::format("config is not valid JSON: {}", e.what()));
    }
    const json& j = c.raw;
    if (!j.is_object()) throw UsageError("config must be a JSON object");

    if (j.contains("background")) c.background = io::background_from_json(j["background"]);
    if (j.contains("perturbation")) c.perturbation = io::perturbation_from_json(j["perturbation"]);
    if (j.contains("measure")) c.measure = io::measure_from_json(j["measure"]);

    if (j.contains("solver")) {
        const json& s = j["solver"];
        if (!s.is_object()) throw UsageError("\"solver\" must be an object");
        if (s.contains("truncation_M")) {
            if (!s["truncation_M"].is_number_integer() || s["truncation_M"].get<long>() < 1)
                throw UsageError("\"truncation_M\" must be a positive integer");
            c.solver.truncation_m = s["truncation_M"].get<long>();
        }
        if (s.contains("filter_dist")) c.solver.filter_dist = positive(s["filter_dist"], "filter_dist");
        if (s.contains("contour_tol")) c.solver.contour_tol = positive(s["contour_tol"], "contour_tol");
        if (s.contains("quad_tol")) c.solver.quad_tol = positive(s["quad_tol"], "quad_tol");
    }
    if (flags.truncation_m) c.solver.truncation_m = *flags.truncation_m;
    if (flags.filter_dist) c.solver.filter_dist = *flags.filter_dist;
    if (flags.contour_tol) c.solver.contour_tol = *flags.contour_tol;
    if (flags.quad_tol) c.solver.quad_tol = *flags.quad_tol;
    if (!(c.solver.filter_dist > 0.0 && c.solver.contour_tol > 0.0 && c.solver.quad_tol > 0.0) ||
        c.solver.truncation_m < 1)
        throw UsageError("solver tolerances must be positive");

    if (j.contains("outputs")) {
        const json& o = j["outputs"];
        if (!o.is_object()) throw UsageError("\"outputs\" must be an object");
        if (o.contains("dir")) {
            if (!o["dir"].is_string()) throw UsageError("\"outputs.dir\" must be a string");
            c.dir = fs::path(o["dir"].get<std::string>());
            if (c.dir.is_relative()) c.dir = fs::path(flags.config).parent_path() / c.dir;
        }
        if (o.contains("formats")) {
            if (!o["formats"].is_array()) throw UsageError("\"outputs.formats\" must be an array");
            c.formats.clear();
            for (const auto& f : o["formats"]) {
                if (!f.is_string()) throw UsageError("output formats must be strings");
                c.formats.insert(f.get<std::string>());
            }
        }
    }
    if (!flags.out_dir.empty()) c.dir = flags.out_dir;
    if (!flags.formats.empty()) c.formats = {flags.formats.begin(), flags.formats.end()};
    for (const auto& f : c.formats)
        if (f != "csv" && f != "json" && f != "svg") throw UsageError(fmt::format("unknown output format '{}'", f));

    // inequality: config block, then flags
    std::string kind;
    if (j.contains("spec")) {
        const json& s = j["spec"];
        if (!s.is_object()) throw UsageError("\"spec\" must be an object");
        if (s.contains("kind")) {
            if (!s["kind"].is_string()) throw UsageError("spec \"kind\" must be a string");
            kind = s["kind"].get<std::string>();
        }
        if (s.contains("p")) {
            if (!s["p"].is_number()) throw UsageError("spec \"p\" must be a number");
            c.p = s["p"].get<double>();
        }
        if (s.contains("eps")) {
            if (!s["eps"].is_number()) throw UsageError("spec \"eps\" must be a number");
            c.eps = s["eps"].get<double>();
        }
    }
    if (!flags.spec.empty()) kind = flags.spec;
    if (flags.p) c.p = *flags.p;
    if (flags.eps) c.eps = *flags.eps;
    if (!kind.empty()) c.spec = InequalitySpec::explore(inequality_kind_from_string(kind), c.p, c.eps);

    if (j.contains("points")) {
        if (!j["points"].is_array()) throw UsageError("\"points\" must be an array");
        for (const auto& z : j["points"]) c.points.push_back(io::complex_from_json(z));
    }

    if (j.contains("sweep")) {
        const json& s = j["sweep"];
        if (!s.is_object()) throw UsageError("\"sweep\" must be an object");
        if (s.contains("t")) {
            if (!s["t"].is_array()) throw UsageError("\"sweep.t\" must be an array");
            for (const auto& t : s["t"]) c.t_grid.push_back(positive(t, "sweep.t"));
        } else {
            const double lo = s.contains("t_min") ? positive(s["t_min"], "t_min") : 1e-3;
            const double hi = s.contains("t_max") ? positive(s["t_max"], "t_max") : 1e2;
            int n = 7;
            if (s.contains("count")) {
                if (!s["count"].is_number_integer()) throw UsageError("\"sweep.count\" must be an integer");
                n = s["count"].get<int>();
            }
            c.t_grid = log_grid(lo, hi, n);
        }
    }
    if (c.t_grid.empty()) c.t_grid = log_grid(1e-3, 1e2, 7);

    if (j.contains("zeros")) {
        const json& z = j["zeros"];
        if (!z.is_object()) throw UsageError("\"zeros\" must be an object");
        if (z.contains("q")) c.q = z["q"].get<double>();
        if (z.contains("r")) c.r = z["r"].get<double>();
        if (z.contains("disk")) {
            const json& d = z["disk"];
            DiskEnvelope env;
            env.alpha = d.value("alpha", 0.0);
            env.beta = d.value("beta", 0.0);
            env.gamma = d.value("gamma", 0.0);
            env.eps = d.value("eps", c.eps);
            if (d.contains("marked"))
                for (const auto& s : d["marked"]) env.marked.push_back(io::complex_from_json(s));
            if (d.contains("zeros"))
                for (const auto& s : d["zeros"]) c.disk_zeros.push_back(io::complex_from_json(s));
            c.disk = env;
        }
    }

    auto need = [&](bool ok, const char* what) {
        if (!ok) throw UsageError(fmt::format("command '{}' needs {} in the config", command, what));
    };
    if (command == "thm22") {
        need(c.measure.has_value(), "\"measure\"");
    } else if (!(command == "zeros" && c.disk && !c.background)) {
        need(c.background.has_value(), "\"background\"");
    }
    if (command == "eig" || command == "lt-report" || command == "sweep" || command == "thm21")
        need(c.perturbation.has_value(), "\"perturbation\"");
    if (command == "zeros" && !c.disk) need(c.perturbation.has_value(), "\"perturbation\"");
    if (command == "lt-report" || command == "sweep") need(c.spec.has_value(), "an inequality (\"spec.kind\" or --spec)");
    if (command == "thm21" || command == "thm22" || command == "zeros") {
        if (!(c.p >= 1.0)) throw UsageError("p must be >= 1");
    }
    if ((command == "thm22" || command == "zeros") && !(c.eps > 0.0) && c.p == 1.0)
        throw UsageError("p = 1 needs eps > 0");
    if (flags.method != "determinant" && flags.method != "truncation" && flags.method != "both")
        throw UsageError(fmt::format("unknown method '{}'", flags.method));
    return c;
}

class Outputs {
  public:
    explicit Outputs(const Config& c) : c_(c) {}

    bool wants(const std::string& format) const { return c_.formats.count(format) > 0; }

    void add(const std::string& name, std::string content) { files_.emplace_back(name, std::move(content)); }
    void add_json(const std::string& name, const json& j) {
        if (wants("json")) add(name, j.dump(2) + "\n");
    }

    void flush() const {
        fs::create_directories(c_.dir);
        for (const auto& [name, content] : files_) {
            std::ofstream out(c_.dir / name, std::ios::binary);
            out << content;
            if (!out) throw UsageError(fmt::format("cannot write {}", (c_.dir / name).string()));
        }
    }

  private:
    const Config& c_;
    std::vector<std::pair<std::string, std::string>> files_;
};

EigenSearchOptions search_options(const Config& c) {
    EigenSearchOptions opts;
    opts.tol = c.solver.contour_tol;
    return opts;
}

QuadratureOptions quad_options(const Config& c) {
    QuadratureOptions opts;
    opts.rel_tol = c.solver.quad_tol;
    return opts;
}

// Points off E probing distances 1e-3 .. 1e3 above band centres, edges and gap centres.
std::vector<cplx> default_points(const FiniteGapSet& e) {
    std::vector<double> xs;
    for (const auto& b : e.bands()) xs.push_back(b.mid());
    for (double x : e.edges()) xs.push_back(x);
    for (std::size_t k = 0; k + 1 < e.band_count(); ++k)
        xs.push_back(0.5 * (e.bands()[k].hi + e.bands()[k + 1].lo));
    std::vector<cplx> out;
    for (double d : log_grid(1e-3, 1e3, 13))
        for (double x : xs) out.emplace_back(x, d);
    return out;
}

std::string eig_csv(const std::vector<EigenvalueRecord>& evs, const FiniteGapSet& e) {
    std::ostringstream s;
    io::write_eigenvalue_csv(s, evs, e);
    return s.str();
}

std::string summary_line(const std::string& command, const std::string& text) {
    return fmt::format("{}: {}", command, text);
}

int run_spectrum(const Config& c) {
    const FiniteGapSet e = spectrum(*c.background);
    Outputs out(c);
    out.add_json("bands.json", io::to_json(e));
    if (out.wants("svg")) out.add("spectrum.svg", io::eigenvalue_svg({}, e, "spectrum"));
    out.flush();
    std::cout << summary_line("spectrum", io::to_json(e).dump()) << '\n';
    return 0;
}

int run_eig(const Config& c, const Flags& flags) {
    const FiniteGapSet e = spectrum(*c.background);
    std::vector<EigenvalueRecord> evs;
    double tube = 0.0;
    if (flags.method != "truncation") {
        auto found = find_all_eigenvalues(*c.background, *c.perturbation, search_options(c));
        evs = std::move(found.eigenvalues);
        tube = found.tube_radius;
    }
    if (flags.method != "determinant") {
        auto trunc = truncated_eigenvalues(*c.background, *c.perturbation, c.solver.truncation_m, c.solver.filter_dist);
        evs.insert(evs.end(), trunc.begin(), trunc.end());
    }
    sort_records(evs);
    Outputs out(c);
    if (out.wants("csv")) out.add("eigenvalues.csv", eig_csv(evs, e));
    json records = json::array();
    for (const auto& r : evs) records.push_back(io::to_json(r, e));
    out.add_json("eigenvalues.json", {{"set", io::to_json(e)},
                                      {"unresolved_tube_radius", tube},
                                      {"truncation_M", c.solver.truncation_m},
                                      {"filter_dist", c.solver.filter_dist},
                                      {"eigenvalues", records}});
    if (out.wants("svg")) out.add("eigenvalues.svg", io::eigenvalue_svg(evs, e, "eigenvalues"));
    out.flush();
    int count = 0;
    for (const auto& r : evs) count += r.multiplicity;
    std::cout << summary_line("eig", fmt::format("{} eigenvalue(s) with multiplicity", count)) << '\n';
    return 0;
}

int run_thm21(const Config& c) {
    const FiniteGapSet e = spectrum(*c.background);
    const Diagonal d = factor(*c.perturbation).d;
    const auto points = c.points.empty() ? default_points(e) : c.points;
    json rows = json::array();
    std::string csv = "re,im,p,lhs,rhs,holds\n";
    double worst = 0.0;
    bool all = true;
    for (cplx z : points) {
        const auto r = sandwich_bound(*c.background, d, z, c.p, quad_options(c));
        rows.push_back({{"z", io::to_json(z)}, {"p", c.p}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"holds", r.holds}});
        csv += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{}\n", z.real(), z.imag(), c.p, r.lhs, r.rhs,
                           r.holds ? 1 : 0);
        if (r.rhs > 0.0) worst = std::max(worst, r.lhs / r.rhs);
        all = all && r.holds;
    }
    Outputs out(c);
    out.add_json("thm21.json", {{"p", c.p}, {"all_hold", all}, {"max_lhs_over_rhs", worst}, {"cases", rows}});
    if (out.wants("csv")) out.add("thm21.csv", csv);
    out.flush();
    std::cout << summary_line("thm21", fmt::format("{} point(s), all hold: {}, max lhs/rhs {:.6g}", points.size(),
                                                   all, worst))
              << '\n';
    return 0;
}

int run_thm22(const Config& c) {
    const auto& mu = *c.measure;
    const auto points = c.points.empty() ? default_points(mu.set()) : c.points;
    json rows = json::array();
    std::string csv = "re,im,moment,ratio\n";
    double k_hat = 0.0;
    for (cplx z : points) {
        const double moment = mu.moment_integral(z, c.p, quad_options(c));
        const double ratio = moment_ratio(mu, z, c.p, c.eps, quad_options(c));
        rows.push_back({{"z", io::to_json(z)}, {"moment", moment}, {"ratio", ratio}});
        csv += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g}\n", z.real(), z.imag(), moment, ratio);
        k_hat = std::max(k_hat, ratio);
    }
    Outputs out(c);
    out.add_json("thm22.json", {{"measure", io::to_json(mu)}, {"p", c.p}, {"eps", c.eps}, {"k_hat", k_hat}, {"cases", rows}});
    if (out.wants("csv")) out.add("thm22.csv", csv);
    out.flush();
    std::cout << summary_line("thm22", fmt::format("{} point(s), K estimate {:.6g}", points.size(), k_hat)) << '\n';
    return 0;
}

int run_lt_report(const Config& c) {
    const FiniteGapSet e = spectrum(*c.background);
    const auto report = inequality_report(*c.background, *c.perturbation, *c.spec, search_options(c));
    Outputs out(c);
    out.add_json("report.json", io::to_json(report, e));
    if (out.wants("csv")) out.add("eigenvalues.csv", eig_csv(report.eigenvalues, e));
    if (out.wants("svg")) out.add("report.svg", io::eigenvalue_svg(report.eigenvalues, e, std::string(to_string(c.spec->kind))));
    out.flush();
    std::cout << summary_line("lt-report", fmt::format("{} lhs {:.10g} rhs {:.10g} ratio {:.10g}{}",
                                                       to_string(c.spec->kind), report.lhs, report.rhs_sum,
                                                       report.ratio, c.spec->exploratory ? " (exploratory)" : ""))
              << '\n';
    return 0;
}

int run_sweep(const Config& c) {
    const FiniteGapSet e = spectrum(*c.background);
    const auto sweep = scaling_sweep(*c.background, *c.perturbation, *c.spec, c.t_grid, search_options(c));
    json rows = json::array();
    std::string csv = "t,lhs,rhs,ratio,eigenvalue_count\n";
    for (std::size_t i = 0; i < sweep.t.size(); ++i) {
        json r = io::to_json(sweep.reports[i], e);
        r["t"] = sweep.t[i];
        rows.push_back(r);
        csv += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{}\n", sweep.t[i], sweep.reports[i].lhs,
                           sweep.reports[i].rhs_sum, sweep.reports[i].ratio, sweep.reports[i].eigenvalue_count);
    }
    Outputs out(c);
    out.add_json("sweep.json", {{"spec", io::to_json(*c.spec)},
                                {"max_ratio", sweep.max_ratio},
                                {"argmax_t", sweep.argmax_t},
                                {"reports", rows}});
    if (out.wants("csv")) out.add("sweep.csv", csv);
    out.flush();
    std::cout << summary_line("sweep", fmt::format("max ratio {:.10g} at t = {:.6g}", sweep.max_ratio, sweep.argmax_t))
              << '\n';
    return 0;
}

int run_zeros(const Config& c) {
    Outputs out(c);
    json result = json::object();
    if (c.disk) {
        result["disk"] = {{"zeros", c.disk_zeros.size()}, {"sum", disk_zero_sum(c.disk_zeros, *c.disk)}};
    }
    if (c.background && c.perturbation) {
        const FiniteGapSet e = spectrum(*c.background);
        // default exponents reproduce the lt-nsa weight
        const double p = c.q ? c.p : c.p + c.eps / 2.0 - 1.0;
        const double q = c.q.value_or(0.5);
        const double r = c.r.value_or((1.0 - c.eps) / 2.0);
        const double eps = c.q ? c.eps : c.eps / 2.0;
        const auto t = exponent_triple(p, q, r, eps);
        const auto found = find_all_eigenvalues(*c.background, *c.perturbation, search_options(c));
        std::vector<cplx> zeros;
        for (const auto& ev : found.eigenvalues)
            for (int k = 0; k < ev.multiplicity; ++k) zeros.push_back(ev.z);
        result["omega"] = {{"p", p},
                           {"q", q},
                           {"r", r},
                           {"eps", eps},
                           {"exponents", {t.p, t.q, t.r}},
                           {"zeros", zeros.size()},
                           {"sum", omega_zero_sum(zeros, e, p, q, r, eps)},
                           {"unresolved_tube_radius", found.tube_radius}};
    }
    out.add_json("zeros.json", result);
    out.flush();
    std::cout << summary_line("zeros", result.dump()) << '\n';
    return 0;
}

// Output directory for error.json when the config itself failed validation.
std::optional<fs::path> fallback_dir(const Flags& flags) {
    if (!flags.out_dir.empty()) return fs::path(flags.out_dir);
    try {
        std::ifstream in(flags.config);
        const json j = json::parse(in);
        fs::path dir = j.at("outputs").at("dir").get<std::string>();
        if (dir.is_relative()) dir = fs::path(flags.config).parent_path() / dir;
        return dir;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

json error_json(const char* kind, const std::string& message) {
    return {{"error", {{"kind", kind}, {"message", message}}}};
}

int fail(int code, const char* kind, const std::string& message, const std::optional<fs::path>& dir) {
    const json err = error_json(kind, message);
    std::cerr << err.dump() << '\n';
    if (dir) {
        std::error_code ec;
        fs::create_directories(*dir, ec);
        std::ofstream out(*dir / "error.json");
        if (out) out << err.dump(2) << '\n';
    }
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Eigenvalue bounds for complex perturbations of finite-gap Jacobi matrices"};
    app.require_subcommand(1, 1);
    Flags flags;

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"spectrum", "Band structure of the periodic background"},
        {"eig", "Discrete eigenvalues of background + perturbation"},
        {"thm21", "Schatten bound for the resolvent sandwich at sample points"},
        {"thm22", "Moment bound for a reflectionless measure at sample points"},
        {"lt-report", "Both sides of one eigenvalue-sum inequality"},
        {"sweep", "Inequality ratios along t * perturbation"},
        {"zeros", "Weighted zero sums on the disk and off E"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("-c,--config", flags.config, "Experiment config (JSON)")->required();
        sub->add_option("-o,--out", flags.out_dir, "Output directory (overrides outputs.dir)");
        sub->add_option("--formats", flags.formats, "Output formats: csv, json, svg");
        sub->add_option("--spec", flags.spec, "Inequality: lt-sa, kato-sa, ultimate-sa, lt0-nsa, kato-nsa, lt-nsa");
        sub->add_option("-p", flags.p, "Exponent p (>= 1)");
        sub->add_option("--eps", flags.eps, "Exponent eps (eps = 0 runs as exploratory)");
        sub->add_option("--contour-tol", flags.contour_tol, "Eigenvalue accuracy and unexplored tube radius (1e-10)");
        sub->add_option("--quad-tol", flags.quad_tol, "Relative quadrature tolerance (1e-10)");
        sub->add_option("--truncation-M", flags.truncation_m, "Truncation half-size for the oracle (500)");
        sub->add_option("--filter-dist", flags.filter_dist, "Truncation eigenvalues closer to E are dropped (0.05)");
        if (name == "eig") sub->add_option("--method", flags.method, "determinant, truncation or both");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail(kExitUsage, "usage", e.what(), std::nullopt);
    }

    const std::string command = app.get_subcommands().front()->get_name();
    std::optional<fs::path> dir;
    try {
        const Config c = load(command, flags);
        dir = c.dir;
        if (command == "spectrum") return run_spectrum(c);
        if (command == "eig") return run_eig(c, flags);
        if (command == "thm21") return run_thm21(c);
        if (command == "thm22") return run_thm22(c);
        if (command == "lt-report") return run_lt_report(c);
        if (command == "sweep") return run_sweep(c);
        return run_zeros(c);
    } catch (const Error& e) {
        if (!dir) dir = fallback_dir(flags);
        return fail(exit_code(e), e.kind(), e.what(), dir);
    } catch (const json::exception& e) {
        if (!dir) dir = fallback_dir(flags);
        return fail(kExitUsage, "usage", e.what(), dir);
    } catch (const fs::filesystem_error& e) {
        return fail(kExitUsage, "usage", e.what(), dir);
    }
}
