#include <doctest.h>

#include <cmath>

#include "bmbem/specfun.hpp"
#include "reference_values.hpp"

using namespace bmbem;
using namespace bmbem::specfun;

namespace {

// ascending series j_n(x) = x^n/(2n+1)!! sum_k (-x^2/2)^k / (k! (2n+3)(2n+5)...(2n+2k+1))
long double j_series(int n, long double x, int terms = 40) {
    long double lead = 1.0L;
    for (int i = 1; i <= n; ++i) lead *= x / (2.0L * i + 1.0L);
    long double term = 1.0L, sum = 1.0L;
    for (int k = 1; k < terms; ++k) {
        term *= -(x * x / 2.0L) / (k * (2.0L * n + 2.0L * k + 1.0L));
        sum += term;
    }
    return lead * sum;
}

long double y_forward(int n, long double x) {
    long double y0 = -std::cos(x) / x;
    long double y1 = -std::cos(x) / (x * x) - std::sin(x) / x;
    if (n == 0) return y0;
    for (int m = 1; m < n; ++m) {
        const long double y2 = (2.0L * m + 1.0L) / x * y1 - y0;
        y0 = y1;
        y1 = y2;
    }
    return y1;
}

}  // namespace

TEST_CASE("j_n trivial and asymptotic values") {
    CHECK(std::abs(sph_bessel_j(0, pi)) <= 1e-15);
    CHECK(sph_bessel_j(1, 1e-4) == doctest::Approx(1e-4 / 3.0).epsilon(1e-8));
    const double series = static_cast<double>(j_series(2, 1.0L, 40));
    CHECK(std::abs(sph_bessel_j(2, 1.0) - series) <= 1e-14 * std::abs(series));
}

TEST_CASE("y_n trivial and asymptotic values") {
    CHECK(std::abs(sph_bessel_y(0, pi / 2)) <= 1e-15);
    // leading term -(2n-1)!!/x^(n+1) = -1e6; next order is relative x^2/2
    CHECK(sph_bessel_y(1, 1e-3) == doctest::Approx(-1e6).epsilon(1e-6));
    const double oracle = static_cast<double>(y_forward(3, 2.0L));
    CHECK(std::abs(sph_bessel_y(3, 2.0) - oracle) <= 1e-13 * std::abs(oracle));
}

TEST_CASE("j_n and y_n against 50-digit reference values") {
    for (const auto& v : ref::bessel) {
        CAPTURE(v.n);
        CAPTURE(v.x);
        const double j = sph_bessel_j(v.n, v.x);
        const double y = sph_bessel_y(v.n, v.x);
        CHECK(std::abs(j - v.j) <= 1e-12 * std::abs(v.j));
        CHECK(std::abs(y - v.y) <= 1e-12 * std::abs(v.y));
    }
}

TEST_CASE("vector evaluation matches scalar evaluation") {
    for (double x : {0.3, 2.0, 17.0, 80.0}) {
        const auto js = sph_bessel_j_all(30, x);
        const auto ys = sph_bessel_y_all(30, x);
        REQUIRE(js.size() == 31);
        for (int n = 0; n <= 30; ++n) {
            CHECK(js[n] == doctest::Approx(sph_bessel_j(n, x)).epsilon(1e-13));
            CHECK(ys[n] == doctest::Approx(sph_bessel_y(n, x)).epsilon(1e-13));
        }
    }
}

TEST_CASE("hankel function values") {
    const cplx h0 = sph_hankel1(0, 1.0);
    const cplx expected = -I * std::exp(I);
    CHECK(std::abs(h0 - expected) <= 1e-15);

    const long double x = 0.5L;
    const long double y2 = (-3.0L / (x * x * x) + 1.0L / x) * std::cos(x) - 3.0L / (x * x) * std::sin(x);
    const cplx oracle(static_cast<double>(j_series(2, x)), static_cast<double>(y2));
    CHECK(std::abs(sph_hankel1(2, 0.5) - oracle) <= 1e-13 * std::abs(oracle));
}

TEST_CASE("derivatives by recurrence agree with finite differences") {
    for (int n : {0, 1, 4, 9}) {
        for (double x : {0.7, 3.0, 12.0}) {
            const double h = 1e-5;
            const double fd_j = (sph_bessel_j(n, x + h) - sph_bessel_j(n, x - h)) / (2 * h);
            const double fd_y = (sph_bessel_y(n, x + h) - sph_bessel_y(n, x - h)) / (2 * h);
            CHECK(sph_bessel_j_deriv(n, x) == doctest::Approx(fd_j).epsilon(1e-7));
            CHECK(sph_bessel_y_deriv(n, x) == doctest::Approx(fd_y).epsilon(1e-7));
            const cplx hd = sph_hankel1_deriv(n, x);
            CHECK(hd.real() == doctest::Approx(sph_bessel_j_deriv(n, x)).epsilon(1e-15));
            CHECK(hd.imag() == doctest::Approx(sph_bessel_y_deriv(n, x)).epsilon(1e-15));
        }
    }
}

TEST_CASE("Wronskian j h' - j' h = i/k^2") {
    for (double k : {0.1, 1.0, 5.0}) {
        for (int n = 0; n <= 10; ++n) {
            const cplx w = sph_bessel_j(n, k) * sph_hankel1_deriv(n, k) - sph_bessel_j_deriv(n, k) * sph_hankel1(n, k);
            const cplx expected = I / (k * k);
            CAPTURE(n);
            CAPTURE(k);
            CHECK(std::abs(w - expected) <= 1e-10 * std::abs(expected));
        }
    }
}

TEST_CASE("three-term recurrence consistency") {
    for (double x : {0.1, 0.5, 1.0, 3.3, 10.0, 27.0, 50.0}) {
        const auto j = sph_bessel_j_all(41, x);
        const auto y = sph_bessel_y_all(41, x);
        for (int n = 1; n <= 40; ++n) {
            for (const auto* f : {&j, &y}) {
                const auto& v = *f;
                const double rhs = (2.0 * n + 1.0) / x * v[n] - v[n - 1];
                const double scale = std::max({std::abs(v[n + 1]), std::abs((2.0 * n + 1.0) / x * v[n]), std::abs(v[n - 1])});
                CAPTURE(n);
                CAPTURE(x);
                CHECK(std::abs(v[n + 1] - rhs) <= 1e-9 * scale);
            }
        }
    }
}

TEST_CASE("small-argument asymptotics of j_n") {
    for (double x : {1e-3, 1e-4, 1e-6}) {
        for (int n = 0; n <= 5; ++n) {
            const double ratio = sph_bessel_j(n, x) * double_factorial_odd(n) / std::pow(x, n);
            CHECK(std::abs(ratio - 1.0) <= 1e-4);
        }
    }
}

TEST_CASE("large orders stay finite and accurate at small arguments") {
    // j_60(0.01) underflows towards 1e-230; ratio against series keeps relative accuracy
    const double s = static_cast<double>(j_series(60, 0.01L, 10));
    CHECK(sph_bessel_j(60, 0.01) == doctest::Approx(s).epsilon(1e-12));
    CHECK(std::isfinite(sph_bessel_y(60, 0.01)));
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(sph_bessel_j(0, 0.0), DomainError);
    CHECK_THROWS_AS(sph_bessel_j(1, -1.0), DomainError);
    CHECK_THROWS_AS(sph_bessel_y(0, 0.0), DomainError);
    CHECK_THROWS_AS(sph_hankel1(2, -0.1), DomainError);
    CHECK_THROWS_AS(sph_hankel1_deriv(2, 0.0), DomainError);
    CHECK_THROWS_AS(sph_bessel_j_deriv(2, 0.0), DomainError);
    CHECK_THROWS_AS(sph_bessel_j(-1, 1.0), DomainError);
    CHECK_THROWS_AS(legendre_p(2, 1.5), DomainError);
    CHECK_THROWS_AS(legendre_p(-1, 0.5), DomainError);
}

TEST_CASE("Legendre polynomials") {
    for (int n = 0; n <= 30; ++n) CHECK(legendre_p(n, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(legendre_p(2, 0.0) == doctest::Approx(-0.5));
    const double t = 0.3;
    const double p5 = (63 * std::pow(t, 5) - 70 * std::pow(t, 3) + 15 * t) / 8.0;
    CHECK(legendre_p(5, t) == doctest::Approx(p5).epsilon(1e-14));
    const auto all = legendre_p_all(6, -0.4);
    for (int n = 0; n <= 6; ++n) CHECK(all[n] == doctest::Approx(legendre_p(n, -0.4)).epsilon(1e-15));
    CHECK(legendre_p(3, -1.0) == doctest::Approx(-1.0));
}
