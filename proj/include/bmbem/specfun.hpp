#pragma once

// Spherical Bessel and Hankel functions of real positive argument, their
// first derivatives, and Legendre polynomials.

#include <vector>

#include "bmbem/common.hpp"

namespace bmbem::specfun {

/// Default cap on the spherical-harmonic degree used by series evaluations.
inline constexpr int default_n_max = 60;

/// j_n(x). Ascending series for x <= 1, forward recurrence for n < x and
/// Miller downward recurrence otherwise.
double sph_bessel_j(int n, double x);

/// y_n(x) by forward recurrence from the closed forms of y_0 and y_1.
double sph_bessel_y(int n, double x);

/// j'_n(x) = j_{n-1}(x) - (n+1)/x j_n(x), with j'_0 = -j_1.
double sph_bessel_j_deriv(int n, double x);
double sph_bessel_y_deriv(int n, double x);

/// h_n(x) = j_n(x) + i y_n(x), spherical Hankel function of the first kind.
cplx sph_hankel1(int n, double x);
cplx sph_hankel1_deriv(int n, double x);

/// All orders 0..n_max at once; entries are index-aligned with the order.
std::vector<double> sph_bessel_j_all(int n_max, double x);
std::vector<double> sph_bessel_y_all(int n_max, double x);

/// Derivative sequence from a value sequence f_0..f_{n_max+1}; returns
/// f'_0..f'_{n_max}.
std::vector<double> derivatives_from_values(const std::vector<double>& f, double x, int n_max);

/// P_n(t) for |t| <= 1 by the three-term recurrence.
double legendre_p(int n, double t);
std::vector<double> legendre_p_all(int n_max, double t);

/// 1 * 3 * ... * (2n+1) in floating point.
double double_factorial_odd(int n);

}  // namespace bmbem::specfun
