#pragma once

// Closed-form reference solutions on the sphere.
//
// Conventions: the incident plane wave travelling along the unit vector d is
// phi_inc(x) = exp(-i k d.x), which expands as
//   sum_n (2n+1) (-i)^n j_n(k r) P_n(cos theta),  cos theta = d.x/|x|.
// Scattered fields radiate with h_n = h_n^(1), matching the kernel exp(ikr).
//
// Critical frequencies: the pure BIE system I/2 - H (sound-hard) has modal
// eigenvalues -i k^2 j_n(k) h'_n(k) and the pure single-layer system G
// (sound-soft) has i k j_n(k) h_n(k). Both vanish exactly at the roots of
// j_n, i.e. at the interior Dirichlet eigenvalues, so the same frequency list
// serves both boundary conditions. A dBIE-only formulation would instead fail
// at the roots of j'_n.

#include <optional>
#include <vector>

#include "bmbem/common.hpp"
#include "bmbem/specfun.hpp"

namespace bmbem::analytic {

enum class OperatorKind { G, H, E, D, N };

std::string to_string(OperatorKind kind);

/// Modal eigenvalue of a boundary operator on the sphere, reduced to the
/// unit sphere: the argument of every special function is x = k R.
///
///   G: i x h_n j_n            H (= H'): 1/2 + i x^2 h'_n j_n
///   E: i x^3 h'_n j'_n        D(eta): i x h_n (j_n - eta x j'_n)
///   N(eta): i x^2 h'_n (j_n + eta x j'_n)
///
/// eta is required for D and N and rejected otherwise.
cplx modal_eigenvalue(OperatorKind kind, int n, double k, std::optional<cplx> eta = std::nullopt,
                      double radius = 1.0);

/// Eigenvalue of the assembled system matrix for mode n on a sphere of the
/// given radius, with physical scaling (G ~ R, E ~ 1/R):
///   hard: 1/2 - H - eta E,   soft: G + eta (1/2 + H').
cplx system_eigenvalue(BoundaryCondition bc, int n, double k, cplx eta, double radius = 1.0);

/// Eigenvalue of a single discrete operator with physical radius scaling.
/// Kind H stands for H and H' alike; D and N are not accepted.
cplx physical_eigenvalue(OperatorKind kind, int n, double k, double radius = 1.0);

struct ModalEntry {
    int n;
    cplx lambda;
    int multiplicity;  // 2n+1
};

struct ModalSpectrum {
    OperatorKind kind;
    double k;
    double radius;
    std::optional<cplx> eta;
    std::vector<ModalEntry> entries;
};

ModalSpectrum modal_spectrum(OperatorKind kind, int n_max, double k,
                             std::optional<cplx> eta = std::nullopt, double radius = 1.0);

enum class FieldKind { potential, velocity };

struct FieldSample {
    double theta;
    cplx value;
};

/// Axisymmetric surface field; theta is the polar angle from the incidence
/// direction.
struct SurfaceField {
    FieldKind kind;
    double k;
    double radius;
    int terms_used;
    std::vector<FieldSample> samples;
};

/// Series coefficients c_n such that the surface field is
/// sum_n c_n P_n(cos theta). Summation stops once three consecutive |c_n|
/// fall below 1e-14 of the accumulated magnitude; throws NonConvergence if
/// n_max is reached first.
std::vector<cplx> surface_coefficients(BoundaryCondition bc, double k, double radius,
                                       int n_max = specfun::default_n_max);

/// Total surface potential on a sound-hard sphere for a unit plane wave.
SurfaceField surface_field_hard(double k, double radius, const std::vector<double>& thetas,
                                int n_max = specfun::default_n_max);

/// Total surface normal velocity on a sound-soft sphere for a unit plane wave.
SurfaceField surface_field_soft(double k, double radius, const std::vector<double>& thetas,
                                int n_max = specfun::default_n_max);

/// Evaluates a coefficient series at the given angles.
std::vector<cplx> evaluate_series(const std::vector<cplx>& coeffs, const std::vector<double>& thetas);

/// Total exterior field at distance r >= radius from the centre. Used to check
/// boundary conditions of the surface series.
cplx total_field(BoundaryCondition bc, double k, double radius, double r, double theta,
                 int n_max = specfun::default_n_max);
/// d/dr of total_field.
cplx total_field_dr(BoundaryCondition bc, double k, double radius, double r, double theta,
                    int n_max = specfun::default_n_max);

struct CriticalFrequency {
    int n;             // Bessel order
    int m;             // 1-based root index
    double x;          // root of j_n
    double freq;       // Hz
    int multiplicity;  // 2n+1
};

/// Frequencies below f_max at which the pure BIE of the given boundary
/// condition loses uniqueness on a sphere of the given radius: f = c x/(2 pi R)
/// for the roots x of j_n. Sorted by frequency.
std::vector<CriticalFrequency> critical_frequencies(double radius, double f_max, BoundaryCondition bc,
                                                    double c = speed_of_sound);

/// Root of j_n in [a, b] by bisection; requires a sign change.
double bessel_j_root(int n, double a, double b, double tol = 1e-12);

}  // namespace bmbem::analytic
