#pragma once

// Burton-Miller systems for sound-hard and sound-soft scattering.
//
//   hard (v = 0):    (I/2 - H - eta E) phi = phi_inc + eta v_inc
//   soft (phi = 0):  (G + eta (I/2 + H')) v = phi_inc + eta v_inc
//
// The dBIE carries the coupling factor; eta = 0 gives the plain BIE.

#include <optional>
#include <string>

#include "bmbem/assembly.hpp"
#include "bmbem/linalg.hpp"
#include "bmbem/mesh.hpp"

namespace bmbem::solver {

enum class CouplingKind { none, classical, constant, third, amini, duhamel, bruno_kunyansky };

struct CouplingStrategy {
    CouplingKind kind = CouplingKind::none;
    cplx constant{};                  // for kind == constant
    std::optional<double> diameter;   // for bruno_kunyansky; falls back to the mesh diameter

    static CouplingStrategy none() { return {}; }
    static CouplingStrategy classical() { return {CouplingKind::classical, {}, {}}; }
    static CouplingStrategy fixed(cplx eta) { return {CouplingKind::constant, eta, {}}; }
    static CouplingStrategy third() { return {CouplingKind::third, {}, {}}; }
    static CouplingStrategy amini() { return {CouplingKind::amini, {}, {}}; }
    static CouplingStrategy duhamel() { return {CouplingKind::duhamel, {}, {}}; }
    static CouplingStrategy bruno_kunyansky(std::optional<double> d = std::nullopt) {
        return {CouplingKind::bruno_kunyansky, {}, d};
    }

    /// Stable identifier used in CSV files: none, classical, third, amini,
    /// duhamel, bk, bk:D, const:IM or const:RE:IM.
    std::string name() const;
    static CouplingStrategy parse(const std::string& s);
};

/// eta for wavenumber k. D is the scatterer diameter, needed by
/// bruno_kunyansky unless the strategy carries its own.
///   none 0, classical i/k, third i/3, amini i min(2, 1/k),
///   duhamel i k / max(k^2, 50), bruno_kunyansky i min(1/3, 2 pi/(D k)).
cplx eta_value(const CouplingStrategy& s, double k, std::optional<double> diameter = std::nullopt);

struct IncidentField {
    Vec3 direction;
    CVector phi;  // at collocation nodes
    CVector v;    // normal derivative at collocation nodes
};

/// Unit plane wave exp(-i k d.x).
IncidentField incident_plane_wave(double k, const Vec3& direction, const Mesh& mesh);

inline const Vec3 default_direction{0.0, 0.0, 1.0};

struct LinearSystem {
    CMatrix a;
    CVector b;
};

/// Needs H and E (hard) or G and H' (soft) in ops; E (hard) or H' (soft) may
/// be missing when eta = 0.
LinearSystem build_system(const OperatorSet& ops, BoundaryCondition bc, cplx eta,
                          const IncidentField& inc);

struct ScatterRun {
    double k = 0.0;
    BoundaryCondition bc = BoundaryCondition::hard;
    cplx eta{};
    LinearSystem system;
    CVector solution;  // phi (hard) or v (soft)
    linalg::LUFactors lu;
    double cond_inf = 0.0;
    std::optional<double> cond_2;
    double relative_residual = 0.0;  // ||A x - b||_inf / ||b||_inf
    double solve_seconds = 0.0;
};

struct SolveOptions {
    bool cond_2 = false;
    Eigen::Index cond_2_cap = linalg::default_svd_cap;
};

/// Builds, factors and solves one system; estimates cond_inf.
ScatterRun solve(const OperatorSet& ops, BoundaryCondition bc, cplx eta, const IncidentField& inc,
                 const SolveOptions& opt = {});

/// x = A^-1 b through LU with partial pivoting. Holds the factors.
struct LUSolution {
    CVector x;
    linalg::LUFactors factors;
};
LUSolution lu_solve(const CMatrix& a, const CVector& b, const std::string& context = {});

/// phi + w (phi_inc - (I/2 - H) phi). At w = 2 this is 2 (phi_inc + H phi).
CVector richardson_step(const CVector& phi, const CMatrix& H, const CVector& phi_inc, double w);

/// Sound-soft variant on the single-layer equation: v + w (phi_inc - G v).
/// Offered for experiment parity only; it brings no substantial gain.
CVector richardson_step_soft(const CVector& v, const CMatrix& G, const CVector& phi_inc, double w);

/// ||I - w (I/2 - H)||_2.
double iteration_norm(const CMatrix& H, double w);

/// Largest w such that ||I - w A||_2 < 1 for A = I/2 - H. The admissible set
/// is the interval (0, w_max), and w_max is the smallest eigenvalue of the
/// Hermitian-definite pencil (A + A^H, A^H A). Returns 0 if no positive w
/// contracts.
double step_size_bound(const CMatrix& H);

struct ResidualDecomposition {
    CVector bie;       // (I/2 - H) phi - phi_inc
    CVector dbie;      // -E phi - v_inc
    CVector combined;  // bie + eta dbie
};

ResidualDecomposition residual_decomposition(const CVector& phi, const OperatorSet& ops,
                                             const IncidentField& inc, cplx eta);

double mean_abs(const CVector& v);

}  // namespace bmbem::solver
