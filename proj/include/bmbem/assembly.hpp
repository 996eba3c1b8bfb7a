#pragma once

// Dense collocation matrices for constant elements on flat triangles:
//   G_ij = int_{T_j} G(x_i, y) dy,  H_ij = int dG/dn_y,  Hp_ij = int dG/dn_x,
//   E_ij = f.p. int d^2G/dn_x dn_y,
// with x_i the centroid of element i.

#include <cstdint>
#include <filesystem>
#include <limits>
#include <vector>

#include "bmbem/common.hpp"
#include "bmbem/mesh.hpp"

namespace bmbem {

struct QuadratureConfig {
    /// Points of the symmetric triangle rule for regular panels (1, 3, 6, 7, 12, 13).
    int regular_rule = 7;
    /// A (sub-)panel is split in four while the collocation point lies closer
    /// to its centroid than near_threshold times its diameter.
    double near_threshold = 2.0;
    int near_subdiv_depth = 4;
    /// Starting Gauss-Legendre order of the angular integral in the self terms;
    /// doubled until successive values agree to self_term_tol.
    int selfterm_polar_order = 8;
    double self_term_tol = 1e-12;
    int selfterm_max_order = 1024;

    void validate() const;
    std::uint64_t hash() const;
};

enum OperatorMask : unsigned {
    op_G = 1u,
    op_H = 2u,
    op_Hp = 4u,
    op_E = 8u,
    op_all = 15u,
};

/// A depth-limited refinement that stopped before the separation criterion
/// was met.
struct QuadratureWarning {
    std::size_t row, col;
    double separation_ratio;  // distance / sub-panel diameter at the depth limit
};

struct OperatorSet {
    double k = 0.0;
    std::size_t n = 0;
    unsigned mask = 0;
    CMatrix G, H, Hp, E;  // empty unless requested
    QuadratureConfig config;
    double assembly_seconds = 0.0;
    std::vector<QuadratureWarning> warnings;

    bool has(OperatorMask op) const { return (mask & op) != 0; }
};

/// Assembles the requested matrices row-parallel. threads = 0 uses the
/// BMBEM_THREADS environment variable or the hardware concurrency.
OperatorSet assemble(const Mesh& mesh, double k, const QuadratureConfig& cfg = {},
                     unsigned mask = op_all, unsigned threads = 0);

/// Weakly singular self term int_T G(c, y) dy at the centroid c, by three
/// centroid-apex sub-triangles in polar coordinates. The radial integral is
/// exact; the angular one is Gauss-Legendre with order doubling.
cplx self_term_G(const Element& element, double k, const QuadratureConfig& cfg = {});

/// Hadamard finite part of int_T d^2G/dn_x dn_y at the centroid: closed-form
/// static part plus the weakly singular remainder E_k - E_0.
cplx self_term_E(const Element& element, double k, const QuadratureConfig& cfg = {});

/// Static finite part f.p. int_T 1/(4 pi r^3) dy for a point x in the plane of
/// T (inside it): -(1/4pi) sum_edges (sin psi_b - sin psi_a)/p.
double static_hypersingular_finite_part(const Element& element, const Vec3& x);

/// Regular/near-singular panel integral of all requested kernels from
/// collocation point x with normal n_x over element e. Exposed for tests.
struct PanelIntegrals {
    cplx g, h, hp, e;
    double min_ratio_at_depth_limit = std::numeric_limits<double>::infinity();
};
PanelIntegrals integrate_panel(const Vec3& x, const Vec3& n_x, const Element& e, double k,
                               const QuadratureConfig& cfg, unsigned mask = op_all);

/// Binary dump: magic "BMOPSET1", u64 N, f64 k, u64 config hash, u32 mask,
/// then each present matrix (G, H, Hp, E order) as row-major complex doubles.
void write_operator_set(const OperatorSet& ops, const std::filesystem::path& path);
OperatorSet read_operator_set(const std::filesystem::path& path);

}  // namespace bmbem
