#include "bmbem/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bmbem::specfun {

namespace {

void require_positive(double x, const char* what) {
    if (!(x > 0.0)) {
        throw DomainError(std::string(what) + ": argument must be > 0, got " + std::to_string(x));
    }
}

void require_order(int n, const char* what) {
    if (n < 0) {
        throw DomainError(std::string(what) + ": order must be >= 0, got " + std::to_string(n));
    }
}

double j0_closed(double x) { return std::sin(x) / x; }
double j1_closed(double x) { return std::sin(x) / (x * x) - std::cos(x) / x; }

// Ascending series x^n/(2n+1)!! * sum_k (-x^2/2)^k / (k! (2n+3)...(2n+2k+1)).
double j_series(int n, double x, double prefactor) {
    const double q = -0.5 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        term *= q / (k * (2.0 * n + 2.0 * k + 1.0));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return prefactor * sum;
}

std::vector<double> j_downward(int n_max, double x) {
    const double nref = std::max(static_cast<double>(n_max), x);
    const int start = n_max + 20 + static_cast<int>(std::sqrt(40.0 * nref));
    std::vector<double> out(n_max + 1, 0.0);
    double upper = 0.0;   // f_{m+1}
    double current = 1e-300;  // f_m
    constexpr double big = 1e250;
    for (int m = start; m >= 1; --m) {
        const double lower = (2.0 * m + 1.0) / x * current - upper;  // f_{m-1}
        upper = current;
        current = lower;
        if (m - 1 <= n_max) out[m - 1] = current;
        if (std::abs(current) > big) {
            current /= big;
            upper /= big;
            for (int i = std::max(m - 1, 0); i <= n_max; ++i) out[i] /= big;
        }
    }
    const double j0 = j0_closed(x);
    const double j1 = j1_closed(x);
    double scale;
    if (n_max >= 1 && std::abs(j1) > std::abs(j0)) {
        scale = j1 / out[1];
    } else {
        scale = j0 / out[0];
    }
    for (double& v : out) v *= scale;
    return out;
}

}  // namespace

double double_factorial_odd(int n) {
    double v = 1.0;
    for (int i = 3; i <= 2 * n + 1; i += 2) v *= i;
    return v;
}

std::vector<double> sph_bessel_j_all(int n_max, double x) {
    require_order(n_max, "sph_bessel_j");
    require_positive(x, "sph_bessel_j");
    std::vector<double> out(n_max + 1);
    if (x <= 1.0) {
        double prefactor = 1.0;
        for (int n = 0; n <= n_max; ++n) {
            if (n > 0) prefactor *= x / (2.0 * n + 1.0);
            out[n] = j_series(n, x, prefactor);
        }
        return out;
    }
    if (n_max < x) {
        out[0] = j0_closed(x);
        if (n_max >= 1) out[1] = j1_closed(x);
        for (int n = 1; n < n_max; ++n) {
            out[n + 1] = (2.0 * n + 1.0) / x * out[n] - out[n - 1];
        }
        return out;
    }
    return j_downward(n_max, x);
}

std::vector<double> sph_bessel_y_all(int n_max, double x) {
    require_order(n_max, "sph_bessel_y");
    require_positive(x, "sph_bessel_y");
    std::vector<double> out(n_max + 1);
    out[0] = -std::cos(x) / x;
    if (n_max >= 1) out[1] = -std::cos(x) / (x * x) - std::sin(x) / x;
    for (int n = 1; n < n_max; ++n) {
        out[n + 1] = (2.0 * n + 1.0) / x * out[n] - out[n - 1];
    }
    return out;
}

std::vector<double> derivatives_from_values(const std::vector<double>& f, double x, int n_max) {
    std::vector<double> d(n_max + 1);
    d[0] = -f[1];
    for (int n = 1; n <= n_max; ++n) d[n] = f[n - 1] - (n + 1.0) / x * f[n];
    return d;
}

double sph_bessel_j(int n, double x) {
    require_order(n, "sph_bessel_j");
    return sph_bessel_j_all(n, x)[n];
}

double sph_bessel_y(int n, double x) {
    require_order(n, "sph_bessel_y");
    return sph_bessel_y_all(n, x)[n];
}

double sph_bessel_j_deriv(int n, double x) {
    require_order(n, "sph_bessel_j_deriv");
    const auto j = sph_bessel_j_all(n + 1, x);
    return n == 0 ? -j[1] : j[n - 1] - (n + 1.0) / x * j[n];
}

double sph_bessel_y_deriv(int n, double x) {
    require_order(n, "sph_bessel_y_deriv");
    const auto y = sph_bessel_y_all(n + 1, x);
    return n == 0 ? -y[1] : y[n - 1] - (n + 1.0) / x * y[n];
}

cplx sph_hankel1(int n, double x) { return {sph_bessel_j(n, x), sph_bessel_y(n, x)}; }

cplx sph_hankel1_deriv(int n, double x) {
    return {sph_bessel_j_deriv(n, x), sph_bessel_y_deriv(n, x)};
}

std::vector<double> legendre_p_all(int n_max, double t) {
    require_order(n_max, "legendre_p");
    if (!(std::abs(t) <= 1.0)) {
        throw DomainError("legendre_p: |t| must be <= 1, got " + std::to_string(t));
    }
    std::vector<double> p(n_max + 1);
    p[0] = 1.0;
    if (n_max >= 1) p[1] = t;
    for (int n = 1; n < n_max; ++n) {
        p[n + 1] = ((2.0 * n + 1.0) * t * p[n] - n * p[n - 1]) / (n + 1.0);
    }
    return p;
}

double legendre_p(int n, double t) { return legendre_p_all(n, t)[n]; }

}  // namespace bmbem::specfun
