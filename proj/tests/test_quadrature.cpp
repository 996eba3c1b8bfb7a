#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "bmbem/quadrature.hpp"

using namespace bmbem::quadrature;

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

// int_T l1^a l2^b l3^c dA / |T|
double exact_moment(int a, int b, int c) {
    return 2.0 * factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 2);
}

double rule_moment(const TriangleRule& r, int a, int b, int c) {
    double s = 0.0;
    for (std::size_t q = 0; q < r.size(); ++q) {
        s += r.weights[q] * std::pow(r.bary[q][0], a) * std::pow(r.bary[q][1], b) * std::pow(r.bary[q][2], c);
    }
    return s;
}

void check_exact_to_degree(const TriangleRule& r, int degree) {
    for (int a = 0; a <= degree; ++a)
        for (int b = 0; a + b <= degree; ++b)
            for (int c = 0; a + b + c <= degree; ++c) {
                CAPTURE(a);
                CAPTURE(b);
                CAPTURE(c);
                CHECK(rule_moment(r, a, b, c) == doctest::Approx(exact_moment(a, b, c)).epsilon(1e-13));
            }
}

}  // namespace

TEST_CASE("symmetric rules") {
    const std::pair<int, int> table[] = {{1, 1}, {3, 2}, {6, 4}, {7, 5}, {12, 6}, {13, 7}};
    for (auto [points, degree] : table) {
        CAPTURE(points);
        const TriangleRule& r = symmetric_rule(points);
        CHECK(r.size() == static_cast<std::size_t>(points));
        CHECK(r.degree == degree);
        for (const auto& b : r.bary) {
            CHECK(b[0] + b[1] + b[2] == doctest::Approx(1.0).epsilon(1e-15));
            for (double l : b) CHECK(l >= 0.0);
        }
        check_exact_to_degree(r, degree);
        // one degree higher is not integrated exactly by every rule; at least
        // one monomial of degree+1 must fail for the stated degree to be tight
        bool tight = false;
        for (int a = 0; a <= degree + 1; ++a) {
            const int b = degree + 1 - a;
            if (std::abs(rule_moment(r, a, b, 0) - exact_moment(a, b, 0)) > 1e-10 * exact_moment(a, b, 0)) tight = true;
        }
        CHECK(tight);
    }
    CHECK(&symmetric_rule(7) == &symmetric_rule(7));
    CHECK_THROWS_AS(symmetric_rule(4), std::invalid_argument);
    CHECK_THROWS_AS(symmetric_rule(0), std::invalid_argument);
}

TEST_CASE("collapsed product rule") {
    for (int order : {1, 2, 4, 8}) {
        const TriangleRule r = collapsed_gauss_rule(order);
        CHECK(r.size() == static_cast<std::size_t>((order + 1) * order));
        CHECK(r.degree == 2 * order - 1);
        check_exact_to_degree(r, 2 * order - 1);
        for (double w : r.weights) CHECK(w > 0.0);
    }
}

TEST_CASE("gauss-legendre") {
    for (int n : {1, 2, 3, 5, 8, 16, 64}) {
        const LineRule r = gauss_legendre(n);
        REQUIRE(r.x.size() == static_cast<std::size_t>(n));
        CHECK(std::accumulate(r.w.begin(), r.w.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
        for (int m = 0; m <= 2 * n - 1; ++m) {
            double s = 0.0;
            for (int q = 0; q < n; ++q) s += r.w[q] * std::pow(r.x[q], m);
            CAPTURE(n);
            CAPTURE(m);
            CHECK(s == doctest::Approx(1.0 / (m + 1)).epsilon(1e-13));
        }
    }
    const LineRule r = gauss_legendre(10, -2.0, 3.0);
    double s = 0.0;
    for (int q = 0; q < 10; ++q) s += r.w[q] * std::cos(r.x[q]);
    CHECK(s == doctest::Approx(std::sin(3.0) - std::sin(-2.0)).epsilon(1e-14));
    CHECK_THROWS_AS(gauss_legendre(0), std::invalid_argument);
}
