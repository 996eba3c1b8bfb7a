#include "bmbem/analytic.hpp"

#include <algorithm>
#include <cmath>

namespace bmbem::analytic {

using namespace specfun;

std::string to_string(OperatorKind kind) {
    switch (kind) {
        case OperatorKind::G: return "G";
        case OperatorKind::H: return "H";
        case OperatorKind::E: return "E";
        case OperatorKind::D: return "D";
        case OperatorKind::N: return "N";
    }
    return "?";
}

namespace {

struct Modal {
    double j, jd;
    cplx h, hd;
};

Modal modal_values(int n, double x) {
    const auto j = sph_bessel_j_all(n + 1, x);
    const auto y = sph_bessel_y_all(n + 1, x);
    const auto jd = derivatives_from_values(j, x, n);
    const auto yd = derivatives_from_values(y, x, n);
    return {j[n], jd[n], {j[n], y[n]}, {jd[n], yd[n]}};
}

void check_k(double k, double radius) {
    if (!(k > 0.0)) throw DomainError("wavenumber must be > 0, got " + std::to_string(k));
    if (!(radius > 0.0)) throw DomainError("radius must be > 0, got " + std::to_string(radius));
}

// (-i)^n
cplx minus_i_pow(int n) {
    switch (n % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, -1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, 1.0};
    }
}

}  // namespace

cplx modal_eigenvalue(OperatorKind kind, int n, double k, std::optional<cplx> eta, double radius) {
    check_k(k, radius);
    if (n < 0) throw DomainError("modal order must be >= 0");
    const bool needs_eta = kind == OperatorKind::D || kind == OperatorKind::N;
    if (needs_eta && !eta) throw DomainError("coupling factor required for " + to_string(kind));
    if (!needs_eta && eta) throw DomainError("coupling factor not used by " + to_string(kind));
    const double x = k * radius;
    const Modal m = modal_values(n, x);
    switch (kind) {
        case OperatorKind::G: return I * x * m.h * m.j;
        case OperatorKind::H: return 0.5 + I * x * x * m.hd * m.j;
        case OperatorKind::E: return I * x * x * x * m.hd * m.jd;
        case OperatorKind::D: return I * x * m.h * (m.j - *eta * x * m.jd);
        case OperatorKind::N: return I * x * x * m.hd * (m.j + *eta * x * m.jd);
    }
    return {};
}

cplx physical_eigenvalue(OperatorKind kind, int n, double k, double radius) {
    check_k(k, radius);
    const double x = k * radius;
    const Modal m = modal_values(n, x);
    switch (kind) {
        case OperatorKind::G: return radius * (I * x * m.h * m.j);
        case OperatorKind::H: return 0.5 + I * x * x * m.hd * m.j;
        case OperatorKind::E: return (I * x * x * x * m.hd * m.jd) / radius;
        default: throw DomainError("physical_eigenvalue: only G, H, E are single operators");
    }
}

cplx system_eigenvalue(BoundaryCondition bc, int n, double k, cplx eta, double radius) {
    const cplx g = physical_eigenvalue(OperatorKind::G, n, k, radius);
    const cplx h = physical_eigenvalue(OperatorKind::H, n, k, radius);
    const cplx e = physical_eigenvalue(OperatorKind::E, n, k, radius);
    if (bc == BoundaryCondition::hard) return 0.5 - h - eta * e;
    return g + eta * (0.5 + h);
}

ModalSpectrum modal_spectrum(OperatorKind kind, int n_max, double k, std::optional<cplx> eta,
                             double radius) {
    ModalSpectrum s{kind, k, radius, eta, {}};
    for (int n = 0; n <= n_max; ++n) {
        s.entries.push_back({n, modal_eigenvalue(kind, n, k, eta, radius), 2 * n + 1});
    }
    return s;
}

std::vector<cplx> surface_coefficients(BoundaryCondition bc, double k, double radius, int n_max) {
    check_k(k, radius);
    const double x = k * radius;
    const auto j = sph_bessel_j_all(n_max + 1, x);
    const auto y = sph_bessel_y_all(n_max + 1, x);
    const auto yd = derivatives_from_values(y, x, n_max);
    const auto jd = derivatives_from_values(j, x, n_max);

    // With the Wronskian j h' - j' h = i/x^2 the bracket of the hard series,
    // j - j' h / h', collapses to i/(x^2 h'), and the soft velocity bracket,
    // k (j' - j h' / h), to -i/(k R^2 h).
    std::vector<cplx> coeffs;
    double magnitude = 0.0;
    int small_run = 0;
    for (int n = 0; n <= n_max; ++n) {
        cplx c;
        if (bc == BoundaryCondition::hard) {
            const cplx hd{jd[n], yd[n]};
            c = std::isfinite(std::abs(hd)) ? I / (x * x * hd) : cplx{};
        } else {
            const cplx h{j[n], y[n]};
            c = std::isfinite(std::abs(h)) ? -I / (k * radius * radius * h) : cplx{};
        }
        c *= (2.0 * n + 1.0) * minus_i_pow(n);
        magnitude += std::abs(c);
        coeffs.push_back(c);
        small_run = std::abs(c) < 1e-14 * magnitude ? small_run + 1 : 0;
        if (small_run == 3) return coeffs;
    }
    throw NonConvergence("surface series not converged at n_max=" + std::to_string(n_max) +
                         " for kR=" + std::to_string(x));
}

std::vector<cplx> evaluate_series(const std::vector<cplx>& coeffs, const std::vector<double>& thetas) {
    std::vector<cplx> out;
    out.reserve(thetas.size());
    const int n_max = static_cast<int>(coeffs.size()) - 1;
    for (double theta : thetas) {
        const auto p = legendre_p_all(n_max, std::clamp(std::cos(theta), -1.0, 1.0));
        cplx sum{};
        for (int n = n_max; n >= 0; --n) sum += coeffs[n] * p[n];
        out.push_back(sum);
    }
    return out;
}

namespace {

SurfaceField surface_field(BoundaryCondition bc, double k, double radius,
                           const std::vector<double>& thetas, int n_max) {
    const auto coeffs = surface_coefficients(bc, k, radius, n_max);
    const auto values = evaluate_series(coeffs, thetas);
    SurfaceField f{bc == BoundaryCondition::hard ? FieldKind::potential : FieldKind::velocity, k,
                   radius, static_cast<int>(coeffs.size()), {}};
    for (std::size_t i = 0; i < thetas.size(); ++i) f.samples.push_back({thetas[i], values[i]});
    return f;
}

// Coefficients of the total field at radius r, or of its r-derivative.
cplx total_field_impl(BoundaryCondition bc, double k, double radius, double r, double theta,
                      int n_max, bool derivative) {
    check_k(k, radius);
    if (r < radius) throw DomainError("total_field: r must be >= radius");
    const double xs = k * radius;
    const double xr = k * r;
    const auto js = sph_bessel_j_all(n_max + 1, xs);
    const auto ys = sph_bessel_y_all(n_max + 1, xs);
    const auto jds = derivatives_from_values(js, xs, n_max);
    const auto yds = derivatives_from_values(ys, xs, n_max);
    const auto jr = sph_bessel_j_all(n_max + 1, xr);
    const auto yr = sph_bessel_y_all(n_max + 1, xr);
    const auto jdr = derivatives_from_values(jr, xr, n_max);
    const auto ydr = derivatives_from_values(yr, xr, n_max);
    const auto p = legendre_p_all(n_max, std::clamp(std::cos(theta), -1.0, 1.0));

    cplx sum{};
    double magnitude = 0.0;
    int small_run = 0;
    for (int n = 0; n <= n_max; ++n) {
        const cplx hs{js[n], ys[n]};
        const cplx hds{jds[n], yds[n]};
        const cplx alpha = bc == BoundaryCondition::hard ? jds[n] / hds : js[n] / hs;
        const cplx radial = derivative ? k * (jdr[n] - alpha * cplx{jdr[n], ydr[n]})
                                       : jr[n] - alpha * cplx{jr[n], yr[n]};
        const cplx term = (2.0 * n + 1.0) * minus_i_pow(n) * radial * p[n];
        // Overflow of y_n only happens far beyond the orders that contribute.
        if (!std::isfinite(std::abs(term))) return sum;
        sum += term;
        magnitude += std::abs(term);
        small_run = std::abs(term) < 1e-16 * magnitude ? small_run + 1 : 0;
        if (small_run == 3) return sum;
    }
    throw NonConvergence("total field series not converged");
}

}  // namespace

SurfaceField surface_field_hard(double k, double radius, const std::vector<double>& thetas, int n_max) {
    return surface_field(BoundaryCondition::hard, k, radius, thetas, n_max);
}

SurfaceField surface_field_soft(double k, double radius, const std::vector<double>& thetas, int n_max) {
    return surface_field(BoundaryCondition::soft, k, radius, thetas, n_max);
}

cplx total_field(BoundaryCondition bc, double k, double radius, double r, double theta, int n_max) {
    return total_field_impl(bc, k, radius, r, theta, n_max, false);
}

cplx total_field_dr(BoundaryCondition bc, double k, double radius, double r, double theta, int n_max) {
    return total_field_impl(bc, k, radius, r, theta, n_max, true);
}

double bessel_j_root(int n, double a, double b, double tol) {
    double fa = sph_bessel_j(n, a);
    const double fb = sph_bessel_j(n, b);
    if (fa * fb > 0.0) throw DomainError("bessel_j_root: no sign change in bracket");
    while (b - a > tol) {
        const double mid = 0.5 * (a + b);
        const double fm = sph_bessel_j(n, mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (fa > 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

std::vector<CriticalFrequency> critical_frequencies(double radius, double f_max, BoundaryCondition,
                                                    double c) {
    if (!(f_max > 0.0)) throw DomainError("critical_frequencies: f_max must be > 0");
    if (!(radius > 0.0)) throw DomainError("critical_frequencies: radius must be > 0");
    const double x_max = 2.0 * pi * radius * f_max / c;
    constexpr double step = 0.05;
    std::vector<CriticalFrequency> out;
    // The first root of j_n exceeds n, so orders with n >= x_max have none.
    for (int n = 0; n < x_max; ++n) {
        int m = 0;
        double a = std::max(0.5, static_cast<double>(n));
        double fa = sph_bessel_j(n, a);
        while (a < x_max) {
            const double b = std::min(a + step, x_max);
            const double fb = sph_bessel_j(n, b);
            if (fa * fb <= 0.0 && fa != 0.0) {
                const double x = bessel_j_root(n, a, b);
                if (x < x_max) out.push_back({n, ++m, x, c * x / (2.0 * pi * radius), 2 * n + 1});
            }
            a = b;
            fa = fb;
            if (b >= x_max) break;
        }
    }
    std::sort(out.begin(), out.end(),
              [](const CriticalFrequency& l, const CriticalFrequency& r) { return l.freq < r.freq; });
    return out;
}

}  // namespace bmbem::analytic
