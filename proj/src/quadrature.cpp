#include "bmbem/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bmbem::quadrature {

namespace {

void add_orbit3(TriangleRule& r, double a, double w) {
    const double b = 1.0 - 2.0 * a;
    r.bary.push_back({a, a, b});
    r.bary.push_back({a, b, a});
    r.bary.push_back({b, a, a});
    for (int i = 0; i < 3; ++i) r.weights.push_back(w);
}

void add_orbit6(TriangleRule& r, double a, double b, double w) {
    const double c = 1.0 - a - b;
    r.bary.push_back({a, b, c});
    r.bary.push_back({a, c, b});
    r.bary.push_back({b, a, c});
    r.bary.push_back({b, c, a});
    r.bary.push_back({c, a, b});
    r.bary.push_back({c, b, a});
    for (int i = 0; i < 6; ++i) r.weights.push_back(w);
}

// Dunavant (1985) symmetric rules.
TriangleRule build_symmetric(int points) {
    TriangleRule r;
    switch (points) {
        case 1:
            r.bary.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
            r.weights.push_back(1.0);
            r.degree = 1;
            break;
        case 3:
            add_orbit3(r, 1.0 / 6.0, 1.0 / 3.0);
            r.degree = 2;
            break;
        case 6:
            add_orbit3(r, 0.445948490915965, 0.223381589678011);
            add_orbit3(r, 0.091576213509771, 0.109951743655322);
            r.degree = 4;
            break;
        case 7: {
            const double s15 = std::sqrt(15.0);
            r.bary.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
            r.weights.push_back(9.0 / 40.0);
            add_orbit3(r, (6.0 - s15) / 21.0, (155.0 - s15) / 1200.0);
            add_orbit3(r, (6.0 + s15) / 21.0, (155.0 + s15) / 1200.0);
            r.degree = 5;
            break;
        }
        case 13:
            // degree 7, negative centroid weight
            r.bary.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
            r.weights.push_back(-0.149570044467682);
            add_orbit3(r, 0.260345966079040, 0.175615257433208);
            add_orbit3(r, 0.065130102902216, 0.053347235608838);
            add_orbit6(r, 0.048690315425316, 0.312865496004874, 0.077113760890257);
            r.degree = 7;
            break;
        case 12:
            add_orbit3(r, 0.249286745170910, 0.116786275726379);
            add_orbit3(r, 0.063089014491502, 0.050844906370207);
            add_orbit6(r, 0.310352451033784, 0.053145049844817, 0.082851075618374);
            r.degree = 6;
            break;
        default:
            throw std::invalid_argument("no symmetric triangle rule with " + std::to_string(points) +
                                        " points (available: 1, 3, 6, 7, 12, 13)");
    }
    return r;
}

}  // namespace

const TriangleRule& symmetric_rule(int points) {
    static std::mutex m;
    static std::map<int, TriangleRule> cache;
    std::lock_guard lock(m);
    auto it = cache.find(points);
    if (it == cache.end()) it = cache.emplace(points, build_symmetric(points)).first;
    return it->second;
}

LineRule gauss_legendre(int n, double a, double b) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    // P_n(t) and P'_n(t) by the three-term recurrence.
    auto legendre = [n](double t) {
        double p0 = 1.0, p1 = t;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        return std::array<double, 2>{p1, n * (t * p1 - p0) / (t * t - 1.0)};
    };
    LineRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < n; ++i) {
        double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            const auto [p, dp] = legendre(t);
            const double dt = p / dp;
            t -= dt;
            if (std::abs(dt) < 1e-16) break;
        }
        const double dp = legendre(t)[1];
        r.x[n - 1 - i] = 0.5 * (b - a) * t + 0.5 * (a + b);
        r.w[n - 1 - i] = 0.5 * (b - a) * 2.0 / ((1.0 - t * t) * dp * dp);
    }
    return r;
}

TriangleRule collapsed_gauss_rule(int order) {
    // one extra node in u absorbs the (1 - u) Jacobian
    const LineRule gu = gauss_legendre(order + 1);
    const LineRule g = gauss_legendre(order);
    TriangleRule r;
    r.degree = 2 * order - 1;
    // (u, v) in the unit square mapped to l1 = u, l2 = (1 - u) v.
    for (int i = 0; i <= order; ++i) {
        for (int j = 0; j < order; ++j) {
            const double u = gu.x[i];
            const double v = g.x[j];
            const double l1 = u;
            const double l2 = (1.0 - u) * v;
            r.bary.push_back({l1, l2, 1.0 - l1 - l2});
            r.weights.push_back(2.0 * gu.w[i] * g.w[j] * (1.0 - u));
        }
    }
    return r;
}

}  // namespace bmbem::quadrature
