#pragma once

// Frequency sweeps, error reports against the sphere series, critical
// frequency search and discrete spectra.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bmbem/analytic.hpp"
#include "bmbem/assembly.hpp"
#include "bmbem/mesh.hpp"
#include "bmbem/solver.hpp"

namespace bmbem::bench {

enum class ReferenceVariant {
    on_sphere,  // series on the true sphere of radius R at the node's polar angle
    at_nodes,   // series on a sphere through the collocation node (radius |x_i|)
};

std::string to_string(ReferenceVariant v);

/// Analytic surface field (phi for hard, v for soft) for every collocation
/// node of the mesh, for a plane wave along direction on a sphere centred at
/// the origin.
CVector analytic_reference(const Mesh& mesh, double k, BoundaryCondition bc, ReferenceVariant variant,
                           double radius = 1.0, const Vec3& direction = solver::default_direction);

struct ErrorReport {
    ReferenceVariant variant;
    std::vector<double> errors;  // NaN at excluded nodes
    double mean = 0.0, min = 0.0, max = 0.0;
    std::size_t excluded = 0;  // nodes with |reference| < 1e-14
};

ErrorReport error_report(const CVector& solution, const CVector& reference, ReferenceVariant variant);
ErrorReport error_report(const CVector& solution, const Mesh& mesh, double k, BoundaryCondition bc,
                         ReferenceVariant variant, double radius = 1.0,
                         const Vec3& direction = solver::default_direction);

struct SweepSpec {
    std::string mesh_description;  // recorded in the manifest
    BoundaryCondition bc = BoundaryCondition::hard;
    double f_start = 10.0, f_stop = 500.0, f_step = 10.0;
    std::vector<double> extra_frequencies;
    /// Dense windows: window_steps frequencies spaced window_step, centred on
    /// each entry.
    std::vector<double> window_centers;
    int window_steps = 9;
    double window_step = 0.05;
    std::vector<solver::CouplingStrategy> strategies;
    /// One extra row per (strategy, w) with one Richardson step applied.
    std::vector<double> richardson_w;
    bool cond_2 = false;
    double radius = 1.0;  // sphere radius for the analytic reference
    Vec3 direction = solver::default_direction;
    QuadratureConfig quadrature;
    std::filesystem::path csv_path;       // empty: not written
    std::filesystem::path manifest_path;  // empty: not written
    unsigned workers = 0;                 // 0: BMBEM_WORKERS or 1

    void validate() const;
    std::vector<double> frequencies() const;
};

struct SweepRow {
    double f = 0.0, k = 0.0;
    std::string strategy;
    std::string variant;  // "direct" or "richardson:w"
    cplx eta{};
    double cond_inf = 0.0;
    std::optional<double> cond_2;
    ErrorReport sphere, nodes;
    std::optional<double> eps_bie_mean;       // hard only
    std::optional<double> eps_combined_mean;  // hard only
    double relative_residual = 0.0;
};

struct FrequencyTiming {
    double f;
    double assembly_seconds;
    double solve_seconds;
};

struct SweepFailure {
    double f;
    std::string what;
};

struct SweepResult {
    std::vector<SweepRow> rows;  // ordered by (f, strategy order, variant order)
    std::vector<FrequencyTiming> timings;
    std::vector<SweepFailure> failures;
    double wall_seconds = 0.0;
};

/// Runs every (frequency, strategy[, richardson]) combination. Failures at a
/// frequency are recorded and the sweep continues.
SweepResult run_sweep(const Mesh& mesh, const SweepSpec& spec);

std::string csv_header();
std::string format_csv(const std::vector<SweepRow>& rows);
void write_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path);
std::string format_manifest(const Mesh& mesh, const SweepSpec& spec, const SweepResult& result);

/// cond_inf of the eta = 0 system at frequency f.
double bie_condition(const Mesh& mesh, BoundaryCondition bc, double f, const QuadratureConfig& cfg = {});

struct CriticalSearch {
    double f = 0.0;
    double cond_inf = 0.0;
    bool bracketed = false;
    int evaluations = 0;
};

/// Maximises cond_inf of the eta = 0 system over [f_guess - h, f_guess + h]:
/// coarse scan with scan_points samples, then golden-section search to tol
/// around the best sample. A maximum at either end of the window is returned
/// with bracketed = false.
CriticalSearch find_numerical_critical(const Mesh& mesh, BoundaryCondition bc, double f_guess,
                                       double half_window, double tol = 1e-3,
                                       const QuadratureConfig& cfg = {}, int scan_points = 11);

enum class SpectrumOperator { G, bie, E };  // bie = I/2 - H
std::string to_string(SpectrumOperator op);

/// Analytic counterpart of a discrete operator's mode-n eigenvalue.
cplx analytic_spectrum_value(SpectrumOperator op, int n, double k, double radius);

struct DiscreteSpectrum {
    std::vector<cplx> values;
    std::string method;  // "dense" or "subspace"
    int iterations = 0;
    bool converged = true;
};

/// Eigenvalues of the discrete operator. At most dense_limit elements use a
/// full eigensolve; above, block subspace iteration returns block values
/// around the low modes (power iteration for G and I/2 - H shifted by 1/2,
/// inverse iteration for E).
DiscreteSpectrum discrete_spectrum(const OperatorSet& ops, SpectrumOperator op,
                                   Eigen::Index dense_limit = 2000, Eigen::Index block = 36,
                                   Eigen::Index wanted = 16);

/// Number of values within rel_tol (relative) of target.
std::size_t cluster_count(const std::vector<cplx>& values, cplx target, double rel_tol);

}  // namespace bmbem::bench
