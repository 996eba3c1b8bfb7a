#include "bmbem/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "bmbem/linalg.hpp"

namespace bmbem::bench {

std::string to_string(ReferenceVariant v) {
    return v == ReferenceVariant::on_sphere ? "on_sphere" : "at_nodes";
}

std::string to_string(SpectrumOperator op) {
    switch (op) {
        case SpectrumOperator::G: return "G";
        case SpectrumOperator::bie: return "bie";
        case SpectrumOperator::E: return "E";
    }
    return "?";
}

CVector analytic_reference(const Mesh& mesh, double k, BoundaryCondition bc, ReferenceVariant variant,
                           double radius, const Vec3& direction) {
    const auto n = static_cast<Eigen::Index>(mesh.size());
    CVector out(n);
    std::vector<cplx> coeffs;
    if (variant == ReferenceVariant::on_sphere) coeffs = analytic::surface_coefficients(bc, k, radius);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Vec3& x = mesh.element(static_cast<std::size_t>(i)).centroid;
        const double r = x.norm();
        const double theta = std::acos(std::clamp(direction.dot(x) / r, -1.0, 1.0));
        if (variant == ReferenceVariant::at_nodes) coeffs = analytic::surface_coefficients(bc, k, r);
        out(i) = analytic::evaluate_series(coeffs, {theta}).front();
    }
    return out;
}

ErrorReport error_report(const CVector& solution, const CVector& reference, ReferenceVariant variant) {
    if (solution.size() != reference.size()) throw std::invalid_argument("error_report: dimension mismatch");
    ErrorReport rep;
    rep.variant = variant;
    rep.errors.assign(static_cast<std::size_t>(solution.size()), std::numeric_limits<double>::quiet_NaN());
    double sum = 0.0;
    rep.min = std::numeric_limits<double>::infinity();
    rep.max = 0.0;
    std::size_t used = 0;
    for (Eigen::Index i = 0; i < solution.size(); ++i) {
        const double ref = std::abs(reference(i));
        if (ref < 1e-14) {
            ++rep.excluded;
            continue;
        }
        const double e = std::abs(solution(i) - reference(i)) / ref;
        rep.errors[static_cast<std::size_t>(i)] = e;
        sum += e;
        rep.min = std::min(rep.min, e);
        rep.max = std::max(rep.max, e);
        ++used;
    }
    if (used == 0) {
        rep.mean = rep.min = rep.max = std::numeric_limits<double>::quiet_NaN();
    } else {
        rep.mean = sum / static_cast<double>(used);
    }
    return rep;
}

ErrorReport error_report(const CVector& solution, const Mesh& mesh, double k, BoundaryCondition bc,
                         ReferenceVariant variant, double radius, const Vec3& direction) {
    return error_report(solution, analytic_reference(mesh, k, bc, variant, radius, direction), variant);
}

void SweepSpec::validate() const {
    if (strategies.empty()) throw std::invalid_argument("sweep: empty strategy list");
    if (!(f_start > 0.0) || !(f_stop >= f_start) || !(f_step > 0.0)) {
        throw std::invalid_argument("sweep: need 0 < f_start <= f_stop and f_step > 0");
    }
    if (window_steps < 1 || !(window_step > 0.0)) throw std::invalid_argument("sweep: bad window");
    for (double f : extra_frequencies) {
        if (!(f > 0.0)) throw std::invalid_argument("sweep: frequencies must be > 0");
    }
    const double half = 0.5 * (window_steps - 1) * window_step;
    for (double c : window_centers) {
        if (c - half < f_start || c + half > f_stop) {
            throw std::invalid_argument("sweep: window around " + std::to_string(c) + " Hz leaves the sweep range");
        }
    }
    for (double w : richardson_w) {
        if (!std::isfinite(w)) throw std::invalid_argument("sweep: richardson step must be finite");
    }
    if (!(radius > 0.0)) throw std::invalid_argument("sweep: radius must be > 0");
    quadrature.validate();
}

std::vector<double> SweepSpec::frequencies() const {
    std::vector<double> f;
    const auto steps = static_cast<long>(std::floor((f_stop - f_start) / f_step + 1e-9));
    for (long i = 0; i <= steps; ++i) f.push_back(f_start + static_cast<double>(i) * f_step);
    for (double c : window_centers) {
        for (int j = 0; j < window_steps; ++j) f.push_back(c + (j - 0.5 * (window_steps - 1)) * window_step);
    }
    f.insert(f.end(), extra_frequencies.begin(), extra_frequencies.end());
    std::sort(f.begin(), f.end());
    std::vector<double> out;
    for (double v : f) {
        if (out.empty() || v - out.back() > 1e-9) out.push_back(v);
    }
    return out;
}

namespace {

unsigned resolve_workers(unsigned workers) {
    if (workers > 0) return workers;
    if (const char* env = std::getenv("BMBEM_WORKERS")) {
        const int v = std::atoi(env);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return 1;
}

std::string rich_name(double w) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, w);
    return "richardson:" + std::string(buf, res.ptr);
}

struct FrequencyOutcome {
    std::vector<SweepRow> rows;
    FrequencyTiming timing{};
    std::optional<std::string> failure;
};

FrequencyOutcome process_frequency(const Mesh& mesh, const SweepSpec& spec, double f, unsigned threads) {
    FrequencyOutcome out;
    out.timing.f = f;
    const double k = wavenumber(f);
    const bool hard = spec.bc == BoundaryCondition::hard;
    std::vector<cplx> etas;
    bool any_coupled = false;
    for (const auto& s : spec.strategies) {
        etas.push_back(solver::eta_value(s, k, mesh.diameter()));
        any_coupled = any_coupled || etas.back() != 0.0;
    }
    unsigned mask = 0;
    if (hard) {
        mask = op_H;
        if (any_coupled) mask |= op_E;
    } else {
        mask = op_G;
        if (any_coupled) mask |= op_Hp;
    }
    const OperatorSet ops = assemble(mesh, k, spec.quadrature, mask, threads);
    out.timing.assembly_seconds = ops.assembly_seconds;

    const auto inc = solver::incident_plane_wave(k, spec.direction, mesh);
    const CVector ref_sphere =
        analytic_reference(mesh, k, spec.bc, ReferenceVariant::on_sphere, spec.radius, spec.direction);
    const CVector ref_nodes =
        analytic_reference(mesh, k, spec.bc, ReferenceVariant::at_nodes, spec.radius, spec.direction);

    solver::SolveOptions opt;
    opt.cond_2 = spec.cond_2;
    for (std::size_t s = 0; s < spec.strategies.size(); ++s) {
        const auto run = solver::solve(ops, spec.bc, etas[s], inc, opt);
        out.timing.solve_seconds += run.solve_seconds;
        auto make_row = [&](const CVector& x, const std::string& variant) {
            SweepRow row;
            row.f = f;
            row.k = k;
            row.strategy = spec.strategies[s].name();
            row.variant = variant;
            row.eta = etas[s];
            row.cond_inf = run.cond_inf;
            row.cond_2 = run.cond_2;
            row.sphere = error_report(x, ref_sphere, ReferenceVariant::on_sphere);
            row.nodes = error_report(x, ref_nodes, ReferenceVariant::at_nodes);
            if (hard) {
                const CVector bie = 0.5 * x - ops.H * x - inc.phi;
                row.eps_bie_mean = solver::mean_abs(bie);
                if (ops.has(op_E)) {
                    row.eps_combined_mean = solver::mean_abs(bie + etas[s] * (-(ops.E * x) - inc.v));
                } else {
                    row.eps_combined_mean = row.eps_bie_mean;
                }
            }
            const CVector r = run.system.a * x - run.system.b;
            row.relative_residual = r.cwiseAbs().maxCoeff() / run.system.b.cwiseAbs().maxCoeff();
            return row;
        };
        out.rows.push_back(make_row(run.solution, "direct"));
        for (double w : spec.richardson_w) {
            const CVector x = hard ? solver::richardson_step(run.solution, ops.H, inc.phi, w)
                                   : solver::richardson_step_soft(run.solution, ops.G, inc.phi, w);
            out.rows.push_back(make_row(x, rich_name(w)));
        }
    }
    return out;
}

}  // namespace

SweepResult run_sweep(const Mesh& mesh, const SweepSpec& spec) {
    spec.validate();
    const auto start = std::chrono::steady_clock::now();
    const auto freqs = spec.frequencies();
    std::vector<FrequencyOutcome> outcomes(freqs.size());
    const unsigned workers = std::min<unsigned>(resolve_workers(spec.workers), static_cast<unsigned>(freqs.size()));
    const unsigned assembly_threads = workers > 1 ? 1u : 0u;
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (std::size_t i = next++; i < freqs.size(); i = next++) {
            try {
                outcomes[i] = process_frequency(mesh, spec, freqs[i], assembly_threads);
            } catch (const std::exception& e) {
                outcomes[i] = {};
                outcomes[i].timing.f = freqs[i];
                outcomes[i].failure = e.what();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    SweepResult result;
    for (auto& o : outcomes) {
        result.timings.push_back(o.timing);
        if (o.failure) {
            result.failures.push_back({o.timing.f, *o.failure});
            continue;
        }
        for (auto& row : o.rows) result.rows.push_back(std::move(row));
    }
    result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!spec.csv_path.empty()) write_csv(result.rows, spec.csv_path);
    if (!spec.manifest_path.empty()) {
        std::ofstream out(spec.manifest_path);
        if (!out) throw std::runtime_error("cannot write " + spec.manifest_path.string());
        out << format_manifest(mesh, spec, result);
    }
    return result;
}

namespace {

void put(std::string& s, double v) {
    if (std::isnan(v)) return;  // empty field
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    s.append(buf, res.ptr);
}

void put(std::string& s, const std::optional<double>& v) {
    if (v) put(s, *v);
}

}  // namespace

std::string csv_header() {
    return "f,k,strategy,variant,eta_re,eta_im,cond_inf,cond_2,"
           "err_mean_sphere,err_min_sphere,err_max_sphere,excluded_sphere,"
           "err_mean_nodes,err_min_nodes,err_max_nodes,excluded_nodes,"
           "eps_bie_mean,eps_combined_mean,relative_residual";
}

std::string format_csv(const std::vector<SweepRow>& rows) {
    std::string s = csv_header();
    s += '\n';
    for (const auto& r : rows) {
        put(s, r.f); s += ',';
        put(s, r.k); s += ',';
        s += r.strategy; s += ',';
        s += r.variant; s += ',';
        put(s, r.eta.real()); s += ',';
        put(s, r.eta.imag()); s += ',';
        put(s, r.cond_inf); s += ',';
        put(s, r.cond_2); s += ',';
        put(s, r.sphere.mean); s += ',';
        put(s, r.sphere.min); s += ',';
        put(s, r.sphere.max); s += ',';
        s += std::to_string(r.sphere.excluded); s += ',';
        put(s, r.nodes.mean); s += ',';
        put(s, r.nodes.min); s += ',';
        put(s, r.nodes.max); s += ',';
        s += std::to_string(r.nodes.excluded); s += ',';
        put(s, r.eps_bie_mean); s += ',';
        put(s, r.eps_combined_mean); s += ',';
        put(s, r.relative_residual);
        s += '\n';
    }
    return s;
}

void write_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << format_csv(rows);
}

std::string format_manifest(const Mesh& mesh, const SweepSpec& spec, const SweepResult& result) {
    using nlohmann::json;
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(mesh.hash()));
    char cfg_hash[17];
    std::snprintf(cfg_hash, sizeof cfg_hash, "%016llx",
                  static_cast<unsigned long long>(spec.quadrature.hash()));
    json j;
    j["tool"] = "bmbem";
    j["version"] = "0.1.0";
    j["mesh"] = {{"description", spec.mesh_description},
                 {"hash", hash},
                 {"elements", mesh.size()},
                 {"vertices", mesh.vertices().size()},
                 {"diameter", mesh.diameter()}};
    j["constants"] = {{"speed_of_sound", speed_of_sound}, {"density", density}};
    j["quadrature"] = {{"regular_rule", spec.quadrature.regular_rule},
                       {"near_threshold", spec.quadrature.near_threshold},
                       {"near_subdiv_depth", spec.quadrature.near_subdiv_depth},
                       {"selfterm_polar_order", spec.quadrature.selfterm_polar_order},
                       {"self_term_tol", spec.quadrature.self_term_tol},
                       {"selfterm_max_order", spec.quadrature.selfterm_max_order},
                       {"hash", cfg_hash}};
    std::vector<std::string> strategies;
    for (const auto& s : spec.strategies) strategies.push_back(s.name());
    j["spec"] = {{"bc", to_string(spec.bc)},
                 {"f_start", spec.f_start},
                 {"f_stop", spec.f_stop},
                 {"f_step", spec.f_step},
                 {"extra_frequencies", spec.extra_frequencies},
                 {"window_centers", spec.window_centers},
                 {"window_steps", spec.window_steps},
                 {"window_step", spec.window_step},
                 {"strategies", strategies},
                 {"richardson_w", spec.richardson_w},
                 {"cond_2", spec.cond_2},
                 {"radius", spec.radius},
                 {"direction", {spec.direction.x(), spec.direction.y(), spec.direction.z()}}};
    j["csv"] = spec.csv_path.string();
    j["rows"] = result.rows.size();
    json timings = json::array();
    for (const auto& t : result.timings) {
        timings.push_back({{"f", t.f}, {"assembly_seconds", t.assembly_seconds}, {"solve_seconds", t.solve_seconds}});
    }
    j["timings"] = timings;
    json failures = json::array();
    for (const auto& f : result.failures) failures.push_back({{"f", f.f}, {"error", f.what}});
    j["failures"] = failures;
    j["wall_seconds"] = result.wall_seconds;
    return j.dump(2) + "\n";
}

double bie_condition(const Mesh& mesh, BoundaryCondition bc, double f, const QuadratureConfig& cfg) {
    const double k = wavenumber(f);
    const unsigned mask = bc == BoundaryCondition::hard ? op_H : op_G;
    const OperatorSet ops = assemble(mesh, k, cfg, mask);
    CMatrix a;
    if (bc == BoundaryCondition::hard) {
        a = -ops.H;
        a.diagonal().array() += 0.5;
    } else {
        a = ops.G;
    }
    try {
        return linalg::cond_inf_estimate(linalg::lu_factor(std::move(a)));
    } catch (const linalg::SingularMatrix&) {
        return std::numeric_limits<double>::infinity();
    }
}

CriticalSearch find_numerical_critical(const Mesh& mesh, BoundaryCondition bc, double f_guess,
                                       double half_window, double tol, const QuadratureConfig& cfg,
                                       int scan_points) {
    if (!(half_window > 0.0)) throw std::invalid_argument("find_numerical_critical: window must be > 0");
    if (!(tol > 0.0)) throw std::invalid_argument("find_numerical_critical: tol must be > 0");
    if (scan_points < 3) throw std::invalid_argument("find_numerical_critical: need >= 3 scan points");
    if (!(f_guess - half_window > 0.0)) throw DomainError("find_numerical_critical: window reaches f <= 0");

    CriticalSearch out;
    auto cond = [&](double f) {
        ++out.evaluations;
        return bie_condition(mesh, bc, f, cfg);
    };
    const double lo = f_guess - half_window;
    const double step = 2.0 * half_window / (scan_points - 1);
    std::vector<double> fs(scan_points), cs(scan_points);
    int best = 0;
    for (int i = 0; i < scan_points; ++i) {
        fs[i] = lo + i * step;
        cs[i] = cond(fs[i]);
        if (cs[i] > cs[best]) best = i;
    }
    if (best == 0 || best == scan_points - 1) {
        out.f = fs[best];
        out.cond_inf = cs[best];
        out.bracketed = false;
        return out;
    }

    // golden section on the bracket around the best sample
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = fs[best - 1], b = fs[best + 1];
    double c = b - ratio * (b - a), d = a + ratio * (b - a);
    double fc = cond(c), fd = cond(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = cond(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = cond(d);
        }
    }
    if (fc > fd) {
        out.f = c;
        out.cond_inf = fc;
    } else {
        out.f = d;
        out.cond_inf = fd;
    }
    if (cs[best] > out.cond_inf) {
        out.f = fs[best];
        out.cond_inf = cs[best];
    }
    out.bracketed = true;
    return out;
}

cplx analytic_spectrum_value(SpectrumOperator op, int n, double k, double radius) {
    switch (op) {
        case SpectrumOperator::G: return analytic::physical_eigenvalue(analytic::OperatorKind::G, n, k, radius);
        case SpectrumOperator::bie:
            return 0.5 - analytic::physical_eigenvalue(analytic::OperatorKind::H, n, k, radius);
        case SpectrumOperator::E: return analytic::physical_eigenvalue(analytic::OperatorKind::E, n, k, radius);
    }
    return 0.0;
}

DiscreteSpectrum discrete_spectrum(const OperatorSet& ops, SpectrumOperator op, Eigen::Index dense_limit,
                                   Eigen::Index block, Eigen::Index wanted) {
    const OperatorMask need = op == SpectrumOperator::G ? op_G : (op == SpectrumOperator::bie ? op_H : op_E);
    if (!ops.has(need)) throw std::invalid_argument("discrete_spectrum: operator not assembled");
    const auto n = static_cast<Eigen::Index>(ops.n);
    DiscreteSpectrum out;
    if (n <= dense_limit) {
        out.method = "dense";
        if (op == SpectrumOperator::G) {
            out.values = linalg::eigenvalues(ops.G);
        } else if (op == SpectrumOperator::E) {
            out.values = linalg::eigenvalues(ops.E);
        } else {
            CMatrix a = -ops.H;
            a.diagonal().array() += 0.5;
            out.values = linalg::eigenvalues(a);
        }
        return out;
    }
    out.method = "subspace";
    linalg::SubspaceResult res;
    if (op == SpectrumOperator::G) {
        res = linalg::subspace_iteration([&](const CMatrix& q) -> CMatrix { return ops.G * q; }, n, block, wanted);
        out.values = res.ritz;
    } else if (op == SpectrumOperator::bie) {
        // eigenvalues of -H, i.e. (I/2 - H) - 1/2
        res = linalg::subspace_iteration([&](const CMatrix& q) -> CMatrix { return -(ops.H * q); }, n, block,
                                         wanted);
        for (cplx mu : res.ritz) out.values.push_back(mu + 0.5);
    } else {
        const linalg::LUFactors lu = linalg::lu_factor(ops.E, "E spectrum");
        res = linalg::subspace_iteration([&](const CMatrix& q) { return linalg::lu_solve(lu, q); }, n, block,
                                         wanted);
        for (cplx mu : res.ritz) out.values.push_back(1.0 / mu);
    }
    out.iterations = res.iterations;
    out.converged = res.converged;
    return out;
}

std::size_t cluster_count(const std::vector<cplx>& values, cplx target, double rel_tol) {
    const double radius = rel_tol * std::abs(target);
    return static_cast<std::size_t>(
        std::count_if(values.begin(), values.end(), [&](cplx v) { return std::abs(v - target) <= radius; }));
}

}  // namespace bmbem::bench
