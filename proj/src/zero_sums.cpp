#include "jlt/zero_sums.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

namespace jlt {

namespace {

double plus(double x) { return std::max(x, 0.0); }

double dist_to_marked(cplx z, const std::vector<cplx>& s) {
    double d = std::numeric_limits<double>::infinity();
    for (cplx x : s) d = std::min(d, std::abs(z - x));
    return d;
}

void check_envelope(const DiskEnvelope& env) {
    if (!(env.alpha >= 0.0 && env.beta >= 0.0 && env.gamma >= 0.0))
        throw UsageError("disk envelope needs alpha, beta, gamma >= 0");
    if (env.beta > 0.0 && env.marked.empty()) throw UsageError("disk envelope with beta > 0 needs marked points");
    for (cplx s : env.marked)
        if (std::abs(std::abs(s) - 1.0) > 1e-12) throw UsageError("marked points must be unimodular");
}

}  // namespace

double disk_zero_sum(const std::vector<cplx>& zeros, const DiskEnvelope& env) {
    check_envelope(env);
    if (!(env.eps > 0.0)) throw UsageError("disk zero sum needs eps > 0");
    const double a = env.alpha + 1.0 + env.eps;
    const double b = plus(env.beta - 1.0 + env.eps);
    const double g = plus(env.gamma - env.eps);
    double sum = 0.0;
    for (cplx z : zeros) {
        const double r = std::abs(z);
        if (!(r < 1.0)) throw DomainError(fmt::format("zero {}{:+}i is not in the open disk", z.real(), z.imag()));
        if (r == 0.0 && g > 0.0) throw DomainError("zero at the origin makes the disk zero sum diverge");
        const double ds = b == 0.0 ? 1.0 : pow0(dist_to_marked(z, env.marked), b);
        sum += pow0(1.0 - r, a) * ds / pow0(r, g);
    }
    return sum;
}

double omega_summand(cplx z, const FiniteGapSet& e, const ExponentTriple& t) {
    if (e.contains(z)) throw DomainError(fmt::format("zero {}{:+}i lies on E", z.real(), z.imag()));
    return pow0(dist_to_set(z, e), t.p) * pow0(dist_to_edges(z, e), t.q) * pow0(1.0 + std::abs(z), t.r);
}

double omega_zero_sum(const std::vector<cplx>& zeros, const FiniteGapSet& e, double p, double q, double r,
                      double eps) {
    const auto t = exponent_triple(p, q, r, eps);
    double sum = 0.0;
    for (cplx z : zeros) sum += omega_summand(z, e, t);
    return sum;
}

NormalizedBlaschke::NormalizedBlaschke(std::vector<cplx> zeros) : zeros_(std::move(zeros)) {
    for (cplx a : zeros_) {
        const double r = std::abs(a);
        if (r == 0.0) throw UsageError("Blaschke product with h(0) = 0 cannot be normalized");
        if (!(r < 1.0)) throw UsageError("Blaschke zeros must lie in the open unit disk");
        log_abs_b0_ += std::log(r);
    }
}

cplx NormalizedBlaschke::operator()(cplx z) const {
    cplx v = 1.0;
    for (cplx a : zeros_) v *= (z - a) / (1.0 - std::conj(a) * z) / (-a);
    return v;
}

double NormalizedBlaschke::log_abs(cplx z) const {
    double s = -log_abs_b0_;
    for (cplx a : zeros_) s += std::log(std::abs(z - a)) - std::log(std::abs(1.0 - std::conj(a) * z));
    return s;
}

double disk_growth_constant(const std::function<double(cplx)>& log_abs_h, const DiskEnvelope& env,
                            int n_radii, int n_angles) {
    check_envelope(env);
    if (n_radii < 1 || n_angles < 1) throw UsageError("growth grid needs positive sizes");
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_radii; ++i) {
        const double r = (i + 0.5) / n_radii;
        for (int k = 0; k < n_angles; ++k) {
            const cplx z = std::polar(r, 2.0 * std::numbers::pi * k / n_angles);
            const double ds = env.beta == 0.0 ? 1.0 : pow0(dist_to_marked(z, env.marked), env.beta);
            best = std::max(best, log_abs_h(z) * pow0(1.0 - r, env.alpha) * ds / pow0(r, env.gamma));
        }
    }
    return best;
}

}  // namespace jlt
