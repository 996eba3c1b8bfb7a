#include "bmbem/solver.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <sstream>

namespace bmbem::solver {

namespace {

double parse_double(const std::string& s, const std::string& what) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw std::invalid_argument("bad number '" + s + "' in coupling strategy '" + what + "'");
    }
    return v;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string CouplingStrategy::name() const {
    switch (kind) {
        case CouplingKind::none: return "none";
        case CouplingKind::classical: return "classical";
        case CouplingKind::third: return "third";
        case CouplingKind::amini: return "amini";
        case CouplingKind::duhamel: return "duhamel";
        case CouplingKind::bruno_kunyansky:
            return diameter ? "bk:" + format_double(*diameter) : "bk";
        case CouplingKind::constant:
            if (constant.real() == 0.0) return "const:" + format_double(constant.imag());
            return "const:" + format_double(constant.real()) + ":" + format_double(constant.imag());
    }
    return "?";
}

CouplingStrategy CouplingStrategy::parse(const std::string& s) {
    if (s == "none" || s == "0") return none();
    if (s == "classical") return classical();
    if (s == "third") return third();
    if (s == "amini") return amini();
    if (s == "duhamel") return duhamel();
    if (s == "bk") return bruno_kunyansky();
    if (s.rfind("bk:", 0) == 0) {
        const double d = parse_double(s.substr(3), s);
        if (!(d > 0.0)) throw std::invalid_argument("bk diameter must be > 0");
        return bruno_kunyansky(d);
    }
    if (s.rfind("const:", 0) == 0) {
        const std::string rest = s.substr(6);
        const auto colon = rest.find(':');
        if (colon == std::string::npos) return fixed(cplx(0.0, parse_double(rest, s)));
        return fixed(cplx(parse_double(rest.substr(0, colon), s), parse_double(rest.substr(colon + 1), s)));
    }
    throw std::invalid_argument("unknown coupling strategy '" + s +
                                "' (none, classical, third, amini, duhamel, bk[:D], const:IM[:RE...])");
}

cplx eta_value(const CouplingStrategy& s, double k, std::optional<double> diameter) {
    if (!(k > 0.0)) throw DomainError("eta_value: wavenumber must be > 0");
    switch (s.kind) {
        case CouplingKind::none: return 0.0;
        case CouplingKind::classical: return I / k;
        case CouplingKind::constant: return s.constant;
        case CouplingKind::third: return I / 3.0;
        case CouplingKind::amini: return I * std::min(2.0, 1.0 / k);
        case CouplingKind::duhamel: return I * k / std::max(k * k, 50.0);
        case CouplingKind::bruno_kunyansky: {
            const auto d = s.diameter ? s.diameter : diameter;
            if (!d) throw std::invalid_argument("bruno_kunyansky coupling needs the scatterer diameter");
            if (!(*d > 0.0)) throw DomainError("bruno_kunyansky: diameter must be > 0");
            return I * std::min(1.0 / 3.0, 2.0 * pi / (*d * k));
        }
    }
    return 0.0;
}

IncidentField incident_plane_wave(double k, const Vec3& direction, const Mesh& mesh) {
    if (std::abs(direction.norm() - 1.0) > 1e-12) throw DomainError("incident direction must be a unit vector");
    IncidentField inc;
    inc.direction = direction;
    const auto n = static_cast<Eigen::Index>(mesh.size());
    inc.phi.resize(n);
    inc.v.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Element& e = mesh.element(static_cast<std::size_t>(i));
        const double phase = -k * direction.dot(e.centroid);
        const cplx p(std::cos(phase), std::sin(phase));
        inc.phi(i) = p;
        inc.v(i) = -I * k * direction.dot(e.normal) * p;
    }
    return inc;
}

namespace {

void require(const OperatorSet& ops, OperatorMask op, const char* name) {
    if (!ops.has(op)) throw std::invalid_argument(std::string("operator set lacks ") + name);
}

}  // namespace

LinearSystem build_system(const OperatorSet& ops, BoundaryCondition bc, cplx eta,
                          const IncidentField& inc) {
    const auto n = static_cast<Eigen::Index>(ops.n);
    if (inc.phi.size() != n || inc.v.size() != n) {
        throw std::invalid_argument("build_system: incident field has " + std::to_string(inc.phi.size()) +
                                    " nodes, operators have " + std::to_string(n));
    }
    LinearSystem sys;
    if (bc == BoundaryCondition::hard) {
        require(ops, op_H, "H");
        sys.a = -ops.H;
        sys.a.diagonal().array() += 0.5;
        if (eta != 0.0) {
            require(ops, op_E, "E");
            sys.a -= eta * ops.E;
        }
    } else {
        require(ops, op_G, "G");
        sys.a = ops.G;
        if (eta != 0.0) {
            require(ops, op_Hp, "H'");
            sys.a += eta * ops.Hp;
            sys.a.diagonal().array() += 0.5 * eta;
        }
    }
    if (eta == 0.0) {
        sys.b = inc.phi;
    } else {
        sys.b = inc.phi + eta * inc.v;
    }
    return sys;
}

LUSolution lu_solve(const CMatrix& a, const CVector& b, const std::string& context) {
    if (a.rows() != b.size()) throw std::invalid_argument("lu_solve: dimension mismatch");
    LUSolution out;
    out.factors = linalg::lu_factor(a, context);
    out.x = linalg::lu_solve(out.factors, b);
    return out;
}

ScatterRun solve(const OperatorSet& ops, BoundaryCondition bc, cplx eta, const IncidentField& inc,
                 const SolveOptions& opt) {
    const auto start = std::chrono::steady_clock::now();
    ScatterRun run;
    run.k = ops.k;
    run.bc = bc;
    run.eta = eta;
    run.system = build_system(ops, bc, eta, inc);
    std::ostringstream context;
    context.precision(17);
    context << "f = " << frequency(ops.k) << " Hz, " << to_string(bc) << ", eta = " << eta;
    auto sol = lu_solve(run.system.a, run.system.b, context.str());
    run.solution = std::move(sol.x);
    run.lu = std::move(sol.factors);
    run.cond_inf = linalg::cond_inf_estimate(run.lu);
    const double bnorm = run.system.b.cwiseAbs().maxCoeff();
    run.relative_residual =
        (run.system.a * run.solution - run.system.b).cwiseAbs().maxCoeff() / (bnorm > 0.0 ? bnorm : 1.0);
    if (opt.cond_2) run.cond_2 = linalg::cond_2_exact(run.system.a, opt.cond_2_cap);
    run.solve_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return run;
}

CVector richardson_step(const CVector& phi, const CMatrix& H, const CVector& phi_inc, double w) {
    if (H.rows() != phi.size() || H.cols() != phi.size() || phi_inc.size() != phi.size()) {
        throw std::invalid_argument("richardson_step: dimension mismatch");
    }
    const CVector residual = phi_inc - (0.5 * phi - H * phi);
    return phi + w * residual;
}

CVector richardson_step_soft(const CVector& v, const CMatrix& G, const CVector& phi_inc, double w) {
    if (G.rows() != v.size() || G.cols() != v.size() || phi_inc.size() != v.size()) {
        throw std::invalid_argument("richardson_step_soft: dimension mismatch");
    }
    return v + w * (phi_inc - G * v);
}

namespace {

CMatrix bie_matrix(const CMatrix& H) {
    CMatrix a = -H;
    a.diagonal().array() += 0.5;
    return a;
}

}  // namespace

double iteration_norm(const CMatrix& H, double w) {
    CMatrix m = w * bie_matrix(H);
    m = -m;
    m.diagonal().array() += 1.0;
    return linalg::singular_values(m).front();
}

double step_size_bound(const CMatrix& H) {
    // ||I - wA||^2 < 1  <=>  w A^H A < A + A^H  (as quadratic forms)
    const CMatrix a = bie_matrix(H);
    const CMatrix sym = a + a.adjoint();
    const CMatrix gram = a.adjoint() * a;
    const auto mu = linalg::generalized_hermitian_eigenvalues(sym, gram);
    return std::max(0.0, mu.front());
}

ResidualDecomposition residual_decomposition(const CVector& phi, const OperatorSet& ops,
                                             const IncidentField& inc, cplx eta) {
    require(ops, op_H, "H");
    require(ops, op_E, "E");
    if (phi.size() != static_cast<Eigen::Index>(ops.n)) {
        throw std::invalid_argument("residual_decomposition: dimension mismatch");
    }
    ResidualDecomposition r;
    r.bie = 0.5 * phi - ops.H * phi - inc.phi;
    r.dbie = -(ops.E * phi) - inc.v;
    r.combined = r.bie + eta * r.dbie;
    return r;
}

double mean_abs(const CVector& v) {
    if (v.size() == 0) return 0.0;
    return v.cwiseAbs().mean();
}

}  // namespace bmbem::solver
