// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "dplab/errors.hpp"
#include "dplab/ode.hpp"
#include "dplab/resolvent.hpp"
#include "dplab/resonance.hpp"
#include "dplab/scattering.hpp"
#include "oracles.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <string>

using namespace dplab;
using oracle::pi;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

ScanOptions window(double lo, double hi)
{
    ScanOptions o;
    o.alpha_min = lo;
    o.alpha_max = hi;
    return o;
}

ShapePotential well() { return ShapePotential::constant(-1.0, -1, 1, "well"); }
ShapePotential half() { return ShapePotential::constant(0.5, -1, 1, "half"); }

Verdict ac1()
{
    Verdict v;
    auto set = scan_resonances(well(), half(), window(-1.0, 30.0));
    v.require(set.records.size() == 4, fmt::format("{} resonances, expected 4", set.records.size()));
    double worst_a = 0, worst_t = 0, worst_k = 0;
    for (std::size_t n = 0; n < std::min<std::size_t>(4, set.records.size()); ++n) {
        auto const& r = set.records[n];
        double sign = n % 2 ? -1.0 : 1.0;
        // n = 0: u = 1 so kappa = int Psi = 1; n >= 1: kappa = (-1)^n / 2
        double kappa = n == 0 ? 1.0 : sign / 2.0;
        worst_a = std::max(worst_a, std::abs(r.alpha - std::pow(n * pi / 2.0, 2)));
        worst_t = std::max(worst_t, std::abs(r.theta - sign));
        worst_k = std::max(worst_k, std::abs(r.kappa - kappa));
    }
    v.require(worst_a <= 1e-6, fmt::format("alpha error {:.3g}", worst_a));
    v.require(worst_t <= 1e-8, fmt::format("theta error {:.3g}", worst_t));
    v.require(worst_k <= 1e-8, fmt::format("kappa error {:.3g}", worst_k));
    if (v.pass) {
        v.detail = fmt::format("max |d alpha| {:.2e}, |d theta| {:.2e}, |d kappa| {:.2e}", worst_a,
                               worst_t, worst_k);
    }
    return v;
}

Verdict ac2()
{
    Verdict v;
    auto zero = ShapePotential::zero();
    double worst_limit = 0, worst_finite = 0;
    for (double k : {0.5, 1.0, 2.0}) {
        auto ls = scatter_limit(zero, half(), 0.0, 2.0, k);
        v.require(ls.resonant && ls.theta == 1.0, "alpha = 0 not resonant with theta = 1");
        double expected = 4 * k * k / (4 * k * k + 4);
        worst_limit = std::max(worst_limit, std::abs(std::norm(ls.T) - expected));
        auto d = scatter_finite(zero, half(), 0.0, 2.0, 1e-3, k);
        worst_finite = std::max(worst_finite, std::abs(d.transmission() - expected));
    }
    v.require(worst_limit <= 1e-12, fmt::format("limit |T|^2 error {:.3g}", worst_limit));
    v.require(worst_finite <= 1e-3, fmt::format("eps = 1e-3 |T|^2 error {:.3g}", worst_finite));
    if (v.pass) {
        v.detail = fmt::format("limit error {:.2e}, eps = 1e-3 error {:.2e}", worst_limit,
                               worst_finite);
    }
    return v;
}

Verdict ac3()
{
    Verdict v;
    std::mt19937_64 rng(303);
    std::uniform_real_distribution<double> kd(0.25, 4.0), bd(-3.0, 3.0);
    double lo = INFINITY, hi = -INFINITY;
    int cases = 0;
    for (int i = 0; i < 25; ++i) {
        double k = i == 0 ? 1.0 : kd(rng);
        double beta = i == 0 ? 1.0 : bd(rng);
        auto rep = scattering_convergence(well(), half(), 1.0, beta, k, default_eps_list());
        v.require(!rep.limit.resonant, "alpha = 1 classified resonant");
        for (std::size_t j = 1; j < rep.rows.size(); ++j) {
            if (!(rep.rows[j].err_R < rep.rows[j - 1].err_R) ||
                !(rep.rows[j].err_T < rep.rows[j - 1].err_T)) {
                v.require(false, fmt::format("no decrease at k = {:.3g}, beta = {:.3g}", k, beta));
                break;
            }
        }
        for (double p : {rep.order_R, rep.order_T}) {
            lo = std::min(lo, p);
            hi = std::max(hi, p);
        }
        ++cases;
    }
    v.require(lo >= 0.8 && hi <= 1.2, fmt::format("orders in [{:.3f}, {:.3f}]", lo, hi));
    if (v.pass) {
        v.detail = fmt::format("{} cases, fitted orders in [{:.3f}, {:.3f}]", cases, lo, hi);
    }
    return v;
}

Verdict ac4()
{
    Verdict v;
    std::vector<std::pair<ShapePotential, ShapePotential>> cases{
        {well(), ShapePotential::polynomial({0.0, 1.0}, -1, 1, "odd")},
        {ShapePotential::polynomial({-1.0, 0.0, 0.5}), ShapePotential::polynomial({0.0, 1.0, 0.0, -2.0})},
        {ShapePotential("even steps", {{-1.0, -0.4, {-2.0}}, {-0.4, 0.4, {1.0}}, {0.4, 1.0, {-2.0}}}),
         ShapePotential("odd steps", {{-1.0, 0.0, {-1.0}}, {0.0, 1.0, {1.0}}})}};
    double worst_theta = 0, worst_kappa = 0, worst_t = 0;
    std::size_t records = 0;
    for (auto const& [phi, psi] : cases) {
        auto set = scan_resonances(phi, psi, window(-50.0, 50.0));
        for (auto const& r : set.records) {
            worst_theta = std::max(worst_theta, std::abs(std::abs(r.theta) - 1.0));
            worst_kappa = std::max(worst_kappa, std::abs(r.kappa));
            for (double beta : {-5.0, 1.0, 10.0}) {
                for (double k : {0.1, 1.0, 5.0}) {
                    worst_t = std::max(worst_t,
                                       std::abs(transmission_probability(r, beta, k) - 1.0));
                }
            }
            ++records;
        }
    }
    v.require(records >= 6, fmt::format("only {} resonances", records));
    v.require(worst_theta <= 1e-8, fmt::format("||theta| - 1| = {:.3g}", worst_theta));
    v.require(worst_kappa <= 1e-8, fmt::format("|kappa| = {:.3g}", worst_kappa));
    v.require(worst_t <= 1e-8, fmt::format("||T|^2 - 1| = {:.3g}", worst_t));
    if (v.pass) {
        v.detail = fmt::format("{} resonances, ||theta|-1| {:.2e}, |kappa| {:.2e}, "
                               "||T|^2-1| {:.2e}",
                               records, worst_theta, worst_kappa, worst_t);
    }
    return v;
}

Verdict ac5()
{
    Verdict v;
    auto phi = ShapePotential("step", {{-1.0, 0.0, {-1.0}}, {0.0, 1.0, {-3.0}}});
    auto psi = ShapePotential::polynomial({0.5, 0.25});
    auto set = scan_resonances(phi, psi, window(0.1, 20.0));
    v.require(!set.records.empty(), "no resonance in (0.1, 20]");
    double spread = 0, theta = 0;
    for (auto const& r : set.records) {
        theta = r.theta;
        v.require(std::abs(std::abs(r.theta) - 1.0) > 1e-3, "theta = +-1 makes the check trivial");
        double lo = INFINITY, hi = -INFINITY;
        for (double k : {0.5, 1.0, 2.0, 5.0}) {
            double t2 = std::norm(scatter_limit(r, 0.0, k).T);
            lo = std::min(lo, t2);
            hi = std::max(hi, t2);
        }
        spread = std::max(spread, hi - lo);
    }
    v.require(spread <= 1e-12, fmt::format("|T|^2 spread {:.3g}", spread));
    if (v.pass) {
        v.detail = fmt::format("{} resonances (e.g. theta = {:.4f}), spread over k {:.2e}",
                               set.records.size(), theta, spread);
    }
    return v;
}

Verdict ac6()
{
    Verdict v;
    std::mt19937_64 rng(606);
    std::uniform_real_distribution<double> ab(-10.0, 10.0);
    std::uniform_real_distribution<double> le(std::log(1e-3), 0.0);
    std::uniform_real_distribution<double> lk(std::log(0.1), std::log(10.0));
    double worst_u = 0, worst_w = 0;
    for (int i = 0; i < 500; ++i) {
        auto phi = oracle::random_step(rng, 6, 1.0).shape();
        auto psi = oracle::random_step(rng, 6, 1.0).shape();
        double alpha = ab(rng), beta = ab(rng), eps = std::exp(le(rng)), k = std::exp(lk(rng));
        auto d = scatter_finite(phi, psi, alpha, beta, eps, k);
        worst_u = std::max(worst_u, std::abs(d.reflection() + d.transmission() - 1.0));
        worst_w = std::max(worst_w, d.wronskian_defect);
    }
    v.require(worst_u <= 1e-8, fmt::format("unitarity defect {:.3g}", worst_u));
    v.require(worst_w <= 1e-8, fmt::format("Wronskian defect {:.3g}", worst_w));
    if (v.pass) {
        v.detail = fmt::format("500 cases, max ||R|^2+|T|^2-1| {:.2e}, max Wronskian defect {:.2e}",
                               worst_u, worst_w);
    }
    return v;
}

Verdict ac7()
{
    Verdict v;
    std::vector<double> eps{0.125, 0.0625, 0.03125, 0.015625, 0.0078125};
    ResolventProbe probe;
    probe.f = probe_function("box");
    probe.zeta = {0.0, 2.0};
    ResolventErrorOptions opts;
    opts.cells_per_eps = 64;

    auto rec = scan_resonances(well(), half(), window(1.0, 5.0)).records;
    v.require(rec.size() == 1, "first well resonance not found");
    double alpha = rec.empty() ? pi * pi / 4 : rec.front().alpha;
    auto res = resolvent_error(well(), half(), alpha, 1.0, eps, probe, opts);
    v.require(res.limit.kind == LimitOperator::Kind::Resonant, "resonant limit not selected");
    for (std::size_t i = 1; i < res.rows.size(); ++i) {
        v.require(res.rows[i].error_l2 < res.rows[i - 1].error_l2,
                  fmt::format("resonant error rises at eps = {}", eps[i]));
    }
    v.require(res.order >= 0.4, fmt::format("resonant order {:.3f}", res.order));

    auto non = resolvent_error(well(), half(), 1.0, 1.0, eps, probe, opts);
    v.require(non.limit.kind == LimitOperator::Kind::NonResonantSplit, "split limit not selected");
    for (std::size_t i = 1; i < non.rows.size(); ++i) {
        bool at_floor = non.rows[i].error_l2 <= opts.floor;
        v.require(at_floor || non.rows[i].error_l2 < non.rows[i - 1].error_l2,
                  fmt::format("non-resonant error rises at eps = {}", eps[i]));
    }
    if (v.pass) {
        v.detail = fmt::format("resonant order {:.3f} (errors {:.2e} -> {:.2e}), non-resonant "
                               "order {:.3f} ({:.2e} -> {:.2e})",
                               res.order, res.rows.front().error_l2, res.rows.back().error_l2,
                               non.order, non.rows.front().error_l2, non.rows.back().error_l2);
    }
    return v;
}

Verdict ac8()
{
    Verdict v;
    std::mt19937_64 rng(808);
    std::uniform_real_distribution<double> ab(-10.0, 10.0);
    std::uniform_real_distribution<double> le(std::log(1e-3), 0.0);
    std::uniform_real_distribution<double> lk(std::log(0.1), std::log(10.0));
    SolverSettings stepping;
    stepping.exact_constant_pieces = false;
    double worst = 0, worst_entry = 0;
    for (int i = 0; i < 100; ++i) {
        auto phi = oracle::random_step(rng, 6, 1.0);
        auto psi = oracle::random_step(rng, 6, 1.0);
        double alpha = ab(rng), beta = ab(rng), eps = std::exp(le(rng)), k = std::exp(lk(rng));
        auto p = fundamental_pair(phi.shape(), psi.shape(), alpha, beta, eps, k, stepping);
        auto [cuts, values] = oracle::combine(phi, psi, alpha, beta * eps);
        auto ref = oracle::transfer_pair(cuts, values, eps * eps * k * k);
        double got[4] = {p.u1, p.du1, p.v1, p.dv1};
        double scale = 0;
        for (double r : ref) scale = std::max(scale, std::abs(r));
        for (int j = 0; j < 4; ++j) {
            worst = std::max(worst, std::abs(got[j] - ref[j]) / scale);
            worst_entry = std::max(worst_entry, std::abs(got[j] - ref[j]) / std::abs(ref[j]));
        }
    }
    v.require(worst_entry <= 1e-9, fmt::format("entrywise relative error {:.3g}", worst_entry));
    if (v.pass) {
        v.detail = fmt::format("100 cases, max entrywise relative error {:.2e} "
                               "({:.2e} against the largest trace)",
                               worst_entry, worst);
    }
    return v;
}

Verdict ac9()
{
    Verdict v;
    std::vector<double> alphas;
    for (int i = 0; i <= 1250; ++i) alphas.push_back(0.02 * i);
    auto rows = sweep_alpha(well(), half(), 1.0, 0.01, 1.0, alphas);
    std::vector<double> lambda;
    for (auto const& r : scan_resonances(well(), half(), window(0.0, 25.0)).records) {
        lambda.push_back(r.alpha);
    }
    v.require(lambda.size() == 4, fmt::format("{} resonances in [0, 25]", lambda.size()));
    auto distance = [&](double a) {
        double d = INFINITY;
        for (double l : lambda) d = std::min(d, std::abs(a - l));
        return d;
    };
    // local maxima above the floor, the grid ends included
    std::vector<double> peaks;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        double left = i > 0 ? rows[i - 1].T2 : -1.0;
        double right = i + 1 < rows.size() ? rows[i + 1].T2 : -1.0;
        if (rows[i].T2 > 0.01 && rows[i].T2 > left && rows[i].T2 >= right) {
            peaks.push_back(rows[i].alpha);
        }
    }
    double worst_peak = 0;
    for (double p : peaks) worst_peak = std::max(worst_peak, distance(p));
    for (double l : lambda) {
        bool hit = false;
        for (double p : peaks) hit |= std::abs(p - l) <= 0.1;
        v.require(hit, fmt::format("no spike near alpha = {:.4f}", l));
    }
    v.require(worst_peak <= 0.1, fmt::format("spike {:.3g} away from the resonant set", worst_peak));
    double floor = 0;
    for (auto const& r : rows) {
        if (distance(r.alpha) > 0.5) floor = std::max(floor, r.T2);
    }
    v.require(floor <= 0.01, fmt::format("off-resonance floor {:.3g}", floor));
    if (v.pass) {
        v.detail = fmt::format("{} spikes, max offset {:.3f}, floor {:.2e}", peaks.size(),
                               worst_peak, floor);
    }
    return v;
}

} // namespace

int main()
{
    struct Criterion {
        const char* id;
        const char* title;
        double limit_s; ///< <= 0: no runtime bound
        std::function<Verdict()> run;
    };
    std::vector<Criterion> criteria{
        {"AC1", "constant-well resonances", 5, ac1},
        {"AC2", "delta special case", 5, ac2},
        {"AC3", "non-resonant opacity", 10, ac3},
        {"AC4", "total transparency", 10, ac4},
        {"AC5", "k-independence at beta = 0", 0, ac5},
        {"AC6", "unitarity property suite", 60, ac6},
        {"AC7", "resolvent convergence", 180, ac7},
        {"AC8", "transfer-matrix oracle", 30, ac8},
        {"AC9", "transmission spikes", 60, ac9},
    };
    int failures = 0;
    for (auto const& c : criteria) {
        auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (std::exception const& e) {
            v.pass = false;
            v.detail = fmt::format("exception: {}", e.what());
        }
        double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.limit_s > 0 && secs > c.limit_s) {
            v.pass = false;
            v.detail += fmt::format("; runtime {:.1f} s over {:.0f} s", secs, c.limit_s);
        }
        std::string budget = c.limit_s > 0 ? fmt::format(" / {:.0f} s", c.limit_s) : "";
        fmt::print("{} {} {}: {} [{:.2f} s{}]\n", c.id, v.pass ? "PASS" : "FAIL", c.title,
                   v.detail, secs, budget);
        failures += v.pass ? 0 : 1;
    }
    fmt::print("{} of {} criteria passed\n", criteria.size() - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
