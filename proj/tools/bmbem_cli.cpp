// bmbem command line: mesh generation and statistics, sweeps, critical
// frequency search, spectra and single solves.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "bmbem/bench.hpp"

using namespace bmbem;

namespace {

struct MeshOptions {
    std::string path;
    int level = 3;
    double radius = 1.0;

    void add(CLI::App* app) {
        app->add_option("--mesh", path, "mesh file (default: icosphere from --level/--radius)");
        app->add_option("--level", level, "icosphere subdivision level")->check(CLI::NonNegativeNumber);
        app->add_option("--radius", radius, "icosphere radius in m")->check(CLI::PositiveNumber);
    }
    Mesh build() const { return path.empty() ? icosphere(level, radius) : load_mesh(path); }
    std::string describe() const {
        if (!path.empty()) return "file:" + path;
        return "icosphere(level=" + std::to_string(level) + ", radius=" + std::to_string(radius) + ")";
    }
};

BoundaryCondition bc_from(const std::string& s) { return parse_boundary_condition(s); }

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dense collocation BEM for exterior Helmholtz scattering with Burton-Miller coupling"};
    app.require_subcommand(1);

    // mesh gen / mesh stats
    auto* mesh_cmd = app.add_subcommand("mesh", "generate or inspect meshes");
    mesh_cmd->require_subcommand(1);
    auto* gen = mesh_cmd->add_subcommand("gen", "write an icosphere mesh");
    int gen_level = 3;
    double gen_radius = 1.0;
    std::string gen_out;
    gen->add_option("--level", gen_level, "subdivision level")->required()->check(CLI::NonNegativeNumber);
    gen->add_option("--radius", gen_radius, "radius in m")->check(CLI::PositiveNumber);
    gen->add_option("--out", gen_out, "output path")->required();
    gen->callback([&] {
        save_mesh(icosphere(gen_level, gen_radius), gen_out);
        std::cout << "wrote " << 20 * (1 << (2 * gen_level)) << " triangles to " << gen_out << "\n";
    });

    auto* stats = mesh_cmd->add_subcommand("stats", "print mesh statistics as JSON");
    std::string stats_path;
    std::optional<double> stats_freq;
    stats->add_option("path", stats_path, "mesh file")->required();
    stats->add_option("--freq", stats_freq, "frequency in Hz for elements per wavelength");
    stats->callback([&] {
        const Mesh m = load_mesh(stats_path);
        const MeshStats s = mesh_stats(m, stats_freq);
        nlohmann::json j = {{"elements", s.elements},
                            {"vertices", s.vertices},
                            {"edge_mean", s.edge_mean},
                            {"edge_min", s.edge_min},
                            {"edge_max", s.edge_max},
                            {"centroid_norm_mean", s.centroid_norm_mean},
                            {"area_sum", s.area_sum},
                            {"diameter", s.diameter},
                            {"euler_characteristic", m.euler_characteristic()}};
        if (s.elements_per_wavelength) {
            j["freq"] = *stats_freq;
            j["elements_per_wavelength"] = *s.elements_per_wavelength;
        }
        std::cout << j.dump(2) << "\n";
    });

    // sweep
    auto* sweep = app.add_subcommand("sweep", "frequency sweep over coupling strategies");
    MeshOptions sweep_mesh;
    sweep_mesh.add(sweep);
    bench::SweepSpec spec;
    std::string sweep_bc = "hard";
    std::vector<std::string> sweep_strategies{"none", "classical"};
    std::string csv_path, manifest_path;
    sweep->add_option("--bc", sweep_bc, "hard or soft");
    sweep->add_option("--fstart", spec.f_start, "first frequency in Hz");
    sweep->add_option("--fstop", spec.f_stop, "last frequency in Hz");
    sweep->add_option("--fstep", spec.f_step, "frequency step in Hz");
    sweep->add_option("--freq", spec.extra_frequencies, "additional frequencies in Hz");
    sweep->add_option("--window", spec.window_centers, "centres of dense windows in Hz");
    sweep->add_option("--window-steps", spec.window_steps, "frequencies per dense window");
    sweep->add_option("--window-step", spec.window_step, "spacing inside dense windows in Hz");
    sweep->add_option("--strategy", sweep_strategies,
                      "coupling strategies: none, classical, third, amini, duhamel, bk[:D], const:IM[:RE...]");
    sweep->add_option("--richardson", spec.richardson_w, "Richardson step sizes applied to each solution");
    sweep->add_flag("--cond2", spec.cond_2, "also compute the exact 2-norm condition number");
    sweep->add_option("--sphere-radius", spec.radius, "radius of the analytic reference sphere");
    sweep->add_option("--workers", spec.workers, "concurrent frequencies (default BMBEM_WORKERS or 1)");
    sweep->add_option("--csv", csv_path, "CSV output path")->required();
    sweep->add_option("--manifest", manifest_path, "JSON manifest path (default CSV path + .json)");
    sweep->callback([&] {
        spec.bc = bc_from(sweep_bc);
        spec.strategies.clear();
        for (const auto& s : sweep_strategies) spec.strategies.push_back(solver::CouplingStrategy::parse(s));
        spec.csv_path = csv_path;
        spec.manifest_path = manifest_path.empty() ? csv_path + ".json" : manifest_path;
        spec.mesh_description = sweep_mesh.describe();
        spec.validate();
        const Mesh m = sweep_mesh.build();
        const auto res = bench::run_sweep(m, spec);
        std::cout << res.rows.size() << " rows, " << res.failures.size() << " failed frequencies, "
                  << res.wall_seconds << " s\n";
        for (const auto& f : res.failures) std::cerr << "failed at " << f.f << " Hz: " << f.what << "\n";
        if (!res.failures.empty()) throw CLI::RuntimeError(2);
    });

    // critical
    auto* crit = app.add_subcommand("critical", "locate a numerical critical frequency");
    MeshOptions crit_mesh;
    crit_mesh.add(crit);
    std::string crit_bc = "hard";
    double guess = 170.0, half = 1.5, tol = 1e-3;
    int scan = 11;
    crit->add_option("--bc", crit_bc, "hard or soft");
    crit->add_option("--guess", guess, "centre of the search window in Hz");
    crit->add_option("--half-window", half, "half width of the search window in Hz")->check(CLI::PositiveNumber);
    crit->add_option("--tol", tol, "frequency tolerance in Hz")->check(CLI::PositiveNumber);
    crit->add_option("--scan", scan, "coarse scan points")->check(CLI::Range(3, 1000));
    crit->callback([&] {
        const Mesh m = crit_mesh.build();
        const auto r = bench::find_numerical_critical(m, bc_from(crit_bc), guess, half, tol, {}, scan);
        nlohmann::json j = {{"f", r.f},
                            {"cond_inf", r.cond_inf},
                            {"bracketed", r.bracketed},
                            {"evaluations", r.evaluations},
                            {"elements", m.size()}};
        std::cout << j.dump(2) << "\n";
        if (!r.bracketed) std::cerr << "maximum at the window boundary: not bracketed\n";
    });

    // eigs
    auto* eigs = app.add_subcommand("eigs", "discrete spectrum against analytic modal eigenvalues");
    MeshOptions eig_mesh;
    eig_mesh.add(eigs);
    std::optional<double> eig_freq, eig_k;
    std::string eig_op = "G";
    int eig_modes = 3;
    double eig_tol = 0.02;
    std::string eig_out;
    eigs->add_option("--freq", eig_freq, "frequency in Hz");
    eigs->add_option("--k", eig_k, "wavenumber in rad/m (instead of --freq)");
    eigs->add_option("--op", eig_op, "G, bie (= I/2 - H) or E");
    eigs->add_option("--modes", eig_modes, "highest mode order compared")->check(CLI::NonNegativeNumber);
    eigs->add_option("--rel-tol", eig_tol, "relative cluster radius");
    eigs->add_option("--out", eig_out, "file for all discrete eigenvalues (re,im)");
    eigs->callback([&] {
        if (eig_freq.has_value() == eig_k.has_value()) throw CLI::ValidationError("give exactly one of --freq, --k");
        const double k = eig_k ? *eig_k : wavenumber(*eig_freq);
        bench::SpectrumOperator op;
        unsigned mask;
        if (eig_op == "G") {
            op = bench::SpectrumOperator::G;
            mask = op_G;
        } else if (eig_op == "bie") {
            op = bench::SpectrumOperator::bie;
            mask = op_H;
        } else if (eig_op == "E") {
            op = bench::SpectrumOperator::E;
            mask = op_E;
        } else {
            throw CLI::ValidationError("--op must be G, bie or E");
        }
        const Mesh m = eig_mesh.build();
        const auto ops = assemble(m, k, {}, mask);
        const auto spec_d = bench::discrete_spectrum(ops, op);
        const double radius = 0.5 * m.diameter();
        std::cout << "n,analytic_re,analytic_im,multiplicity,count\n";
        for (int n = 0; n <= eig_modes; ++n) {
            const cplx lam = bench::analytic_spectrum_value(op, n, k, radius);
            std::cout << n << ',' << num(lam.real()) << ',' << num(lam.imag()) << ',' << 2 * n + 1 << ','
                      << bench::cluster_count(spec_d.values, lam, eig_tol) << "\n";
        }
        if (!eig_out.empty()) {
            std::ofstream out(eig_out);
            out << "re,im\n";
            for (cplx v : spec_d.values) out << num(v.real()) << ',' << num(v.imag()) << "\n";
        }
    });

    // solve
    auto* solve = app.add_subcommand("solve", "single frequency solve with per-node output");
    MeshOptions solve_mesh;
    solve_mesh.add(solve);
    std::string solve_bc = "hard", solve_strategy = "classical", solve_out;
    double solve_freq = 100.0;
    std::optional<double> solve_w;
    solve->add_option("--bc", solve_bc, "hard or soft");
    solve->add_option("--freq", solve_freq, "frequency in Hz")->required()->check(CLI::PositiveNumber);
    solve->add_option("--strategy", solve_strategy, "coupling strategy");
    solve->add_option("--richardson", solve_w, "apply one Richardson step of this size");
    solve->add_option("--out", solve_out, "per-node CSV output")->required();
    solve->callback([&] {
        const BoundaryCondition bc = bc_from(solve_bc);
        const Mesh m = solve_mesh.build();
        const double k = wavenumber(solve_freq);
        const auto strategy = solver::CouplingStrategy::parse(solve_strategy);
        const cplx eta = solver::eta_value(strategy, k, m.diameter());
        const unsigned mask = bc == BoundaryCondition::hard ? (op_H | op_E) : (op_G | op_Hp);
        const auto ops = assemble(m, k, {}, mask);
        const auto inc = solver::incident_plane_wave(k, solver::default_direction, m);
        const auto run = solver::solve(ops, bc, eta, inc);
        CVector x = run.solution;
        if (solve_w) {
            x = bc == BoundaryCondition::hard ? solver::richardson_step(x, ops.H, inc.phi, *solve_w)
                                              : solver::richardson_step_soft(x, ops.G, inc.phi, *solve_w);
        }
        const double radius = 0.5 * m.diameter();
        const CVector ref = bench::analytic_reference(m, k, bc, bench::ReferenceVariant::on_sphere, radius);
        const auto rep = bench::error_report(x, ref, bench::ReferenceVariant::on_sphere);
        std::ofstream out(solve_out);
        if (!out) throw std::runtime_error("cannot write " + solve_out);
        out << "i,x,y,z,re,im,ref_re,ref_im,rel_err\n";
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            const Vec3& c = m.element(static_cast<std::size_t>(i)).centroid;
            out << i << ',' << num(c.x()) << ',' << num(c.y()) << ',' << num(c.z()) << ',' << num(x(i).real())
                << ',' << num(x(i).imag()) << ',' << num(ref(i).real()) << ',' << num(ref(i).imag()) << ','
                << (std::isnan(rep.errors[i]) ? std::string() : num(rep.errors[i])) << "\n";
        }
        nlohmann::json j = {{"f", solve_freq},
                            {"k", k},
                            {"bc", solve_bc},
                            {"strategy", strategy.name()},
                            {"eta", {eta.real(), eta.imag()}},
                            {"cond_inf", run.cond_inf},
                            {"relative_residual", run.relative_residual},
                            {"err_mean", rep.mean},
                            {"err_min", rep.min},
                            {"err_max", rep.max}};
        std::cout << j.dump(2) << "\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
