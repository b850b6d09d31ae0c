#include "dplab/quadrature.hpp"

#include "dplab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace dplab {

namespace {

GaussRule build_rule(int n)
{
    GaussRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        auto idx = static_cast<std::size_t>(n - 1 - i);
        rule.nodes[idx] = x;
        rule.weights[idx] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

} // namespace

const GaussRule& gauss_legendre(int n)
{
    if (n < 1) {
        throw ValidationError("Gauss rule needs at least one point");
    }
    static std::mutex mutex;
    static std::map<int, GaussRule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) {
        it = cache.emplace(n, build_rule(n)).first;
    }
    return it->second;
}

double composite_gauss(const std::function<double(double)>& f, double a, double b,
                       std::span<const double> cuts, double max_panel, int points)
{
    if (!(a < b)) {
        return 0.0;
    }
    std::vector<double> edges{a, b};
    for (double c : cuts) {
        if (a < c && c < b) {
            edges.push_back(c);
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    auto const& rule = gauss_legendre(points);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        double lo = edges[i];
        double hi = edges[i + 1];
        int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / max_panel)));
        double width = (hi - lo) / panels;
        for (int p = 0; p < panels; ++p) {
            double pa = lo + p * width;
            double mid = pa + 0.5 * width;
            double half = 0.5 * width;
            double acc = 0.0;
            for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
                acc += rule.weights[j] * f(mid + half * rule.nodes[j]);
            }
            total += half * acc;
        }
    }
    return total;
}

} // namespace dplab
