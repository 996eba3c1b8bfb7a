#include "bmbem/assembly.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <mutex>
#include <thread>

#include "bmbem/kernels.hpp"
#include "bmbem/quadrature.hpp"

namespace bmbem {

void QuadratureConfig::validate() const {
    quadrature::symmetric_rule(regular_rule);
    if (!(near_threshold > 0.0)) throw std::invalid_argument("near_threshold must be > 0");
    if (near_subdiv_depth < 0) throw std::invalid_argument("near_subdiv_depth must be >= 0");
    if (selfterm_polar_order < 1) throw std::invalid_argument("selfterm_polar_order must be >= 1");
    if (selfterm_max_order < selfterm_polar_order) {
        throw std::invalid_argument("selfterm_max_order must be >= selfterm_polar_order");
    }
}

std::uint64_t QuadratureConfig::hash() const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](const void* data, std::size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= p[i];
            h *= 1099511628211ull;
        }
    };
    mix(&regular_rule, sizeof regular_rule);
    mix(&near_threshold, sizeof near_threshold);
    mix(&near_subdiv_depth, sizeof near_subdiv_depth);
    mix(&selfterm_polar_order, sizeof selfterm_polar_order);
    mix(&self_term_tol, sizeof self_term_tol);
    mix(&selfterm_max_order, sizeof selfterm_max_order);
    return h;
}

namespace {

// Edge of a panel seen from an in-plane point: perpendicular distance p and
// the polar angles of both ends measured from the foot of the perpendicular.
struct EdgeView {
    double p;
    double psi_a, psi_b;
};

std::array<EdgeView, 3> edge_views(const Element& el, const Vec3& x) {
    std::array<EdgeView, 3> out{};
    for (int i = 0; i < 3; ++i) {
        const Vec3& a = el.corners[i];
        const Vec3& b = el.corners[(i + 1) % 3];
        const Vec3 e = (b - a).normalized();
        const Vec3 foot = a + (x - a).dot(e) * e;
        const double p = (x - foot).norm();
        out[i] = {p, std::atan2((a - foot).dot(e), p), std::atan2((b - foot).dot(e), p)};
    }
    return out;
}

// sum over edges of int_{psi_a}^{psi_b} f(p / cos psi) dpsi with order doubling.
template <typename F>
cplx polar_integral(const Element& el, const QuadratureConfig& cfg, F&& radial) {
    const auto views = edge_views(el, el.centroid);
    auto evaluate = [&](int order) {
        const auto gl = quadrature::gauss_legendre(order);
        cplx sum{};
        for (const EdgeView& v : views) {
            const double span = v.psi_b - v.psi_a;
            for (int q = 0; q < order; ++q) {
                const double psi = v.psi_a + span * gl.x[q];
                sum += span * gl.w[q] * radial(v.p / std::cos(psi));
            }
        }
        return sum;
    };
    int order = cfg.selfterm_polar_order;
    cplx previous = evaluate(order);
    while (2 * order <= cfg.selfterm_max_order) {
        order *= 2;
        const cplx current = evaluate(order);
        if (std::abs(current - previous) <= cfg.self_term_tol * std::abs(current)) return current;
        previous = current;
    }
    throw NonConvergence("self term angular quadrature did not converge up to order " +
                         std::to_string(cfg.selfterm_max_order));
}

double x_minus_sin(double x) {
    if (std::abs(x) < 0.1) {
        const double x2 = x * x;
        return x * x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0)));
    }
    return x - std::sin(x);
}

}  // namespace

cplx self_term_G(const Element& element, double k, const QuadratureConfig& cfg) {
    // int_0^R exp(ikr)/(4 pi) dr = (exp(ikR) - 1)/(4 pi i k)
    return polar_integral(element, cfg, [k](double R) -> cplx {
        if (k == 0.0) return R / (4.0 * pi);
        const double x = k * R;
        const double s = std::sin(0.5 * x);
        return cplx(std::sin(x), 2.0 * s * s) / (4.0 * pi * k);
    });
}

double static_hypersingular_finite_part(const Element& element, const Vec3& x) {
    double sum = 0.0;
    for (const EdgeView& v : edge_views(element, x)) {
        sum += (std::sin(v.psi_b) - std::sin(v.psi_a)) / v.p;
    }
    return -sum / (4.0 * pi);
}

cplx self_term_E(const Element& element, double k, const QuadratureConfig& cfg) {
    const double e0 = static_hypersingular_finite_part(element, element.centroid);
    if (k == 0.0) return e0;
    // In-plane E_k - E_0 = (exp(ikr)(1 - ikr) - 1)/(4 pi r^3); its radial
    // integral from 0 to R is ((1 - exp(ikR))/R + ik)/(4 pi).
    const cplx remainder = polar_integral(element, cfg, [k](double R) -> cplx {
        const double x = k * R;
        const double s = std::sin(0.5 * x);
        return cplx(2.0 * s * s, x_minus_sin(x)) / (4.0 * pi * R);
    });
    return e0 + remainder;
}

namespace {

struct LeafContext {
    const Vec3& x;
    const Vec3& n_x;
    const Vec3& n_y;
    double k;
    unsigned mask;
    const quadrature::TriangleRule& rule;
    double threshold;
    int max_depth;
};

void integrate_leaf(const LeafContext& c, const Vec3& a, const Vec3& b, const Vec3& d, double area,
                    PanelIntegrals& acc) {
    const double k = c.k;
    for (std::size_t q = 0; q < c.rule.size(); ++q) {
        const auto& l = c.rule.bary[q];
        const Vec3 y = l[0] * a + l[1] * b + l[2] * d;
        const double w = c.rule.weights[q] * area;
        const Vec3 rv = c.x - y;
        const double r = rv.norm();
        const double inv_r = 1.0 / r;
        const double kr = k * r;
        const cplx g = cplx(std::cos(kr), std::sin(kr)) * (w * inv_r / (4.0 * pi));
        if (c.mask & op_G) acc.g += g;
        if (c.mask & (op_H | op_Hp | op_E)) {
            const cplx dg = g * cplx(-inv_r, k);
            const double dnx = rv.dot(c.n_x) * inv_r;
            const double dny = -rv.dot(c.n_y) * inv_r;
            if (c.mask & op_H) acc.h += dg * dny;
            if (c.mask & op_Hp) acc.hp += dg * dnx;
            if (c.mask & op_E) {
                const cplx radial(3.0 * inv_r * inv_r - k * k, -3.0 * k * inv_r);
                const cplx tangential(inv_r * inv_r, -k * inv_r);
                acc.e += g * (radial * (dnx * dny) + tangential * c.n_x.dot(c.n_y));
            }
        }
    }
}

void integrate_recursive(const LeafContext& c, const Vec3& a, const Vec3& b, const Vec3& d,
                         double area, int depth, PanelIntegrals& acc) {
    const Vec3 centroid = (a + b + d) / 3.0;
    const double diam = std::sqrt(std::max({(b - a).squaredNorm(), (d - b).squaredNorm(),
                                            (a - d).squaredNorm()}));
    const double dist = (c.x - centroid).norm();
    if (dist < c.threshold * diam) {
        if (depth < c.max_depth) {
            const Vec3 ab = 0.5 * (a + b);
            const Vec3 bd = 0.5 * (b + d);
            const Vec3 da = 0.5 * (d + a);
            const double quarter = 0.25 * area;
            integrate_recursive(c, a, ab, da, quarter, depth + 1, acc);
            integrate_recursive(c, ab, b, bd, quarter, depth + 1, acc);
            integrate_recursive(c, da, bd, d, quarter, depth + 1, acc);
            integrate_recursive(c, ab, bd, da, quarter, depth + 1, acc);
            return;
        }
        acc.min_ratio_at_depth_limit = std::min(acc.min_ratio_at_depth_limit, dist / diam);
    }
    integrate_leaf(c, a, b, d, area, acc);
}

unsigned resolve_threads(unsigned threads) {
    if (threads > 0) return threads;
    if (const char* env = std::getenv("BMBEM_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

PanelIntegrals integrate_panel(const Vec3& x, const Vec3& n_x, const Element& e, double k,
                               const QuadratureConfig& cfg, unsigned mask) {
    const LeafContext c{x, n_x, e.normal, k, mask, quadrature::symmetric_rule(cfg.regular_rule),
                        cfg.near_threshold, cfg.near_subdiv_depth};
    PanelIntegrals acc{};
    integrate_recursive(c, e.corners[0], e.corners[1], e.corners[2], e.area, 0, acc);
    return acc;
}

OperatorSet assemble(const Mesh& mesh, double k, const QuadratureConfig& cfg, unsigned mask,
                     unsigned threads) {
    if (!(k > 0.0)) throw DomainError("assemble: wavenumber must be > 0");
    if ((mask & op_all) == 0) throw std::invalid_argument("assemble: empty operator mask");
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();

    OperatorSet ops;
    ops.k = k;
    ops.n = mesh.size();
    ops.mask = mask & op_all;
    ops.config = cfg;
    const auto n = static_cast<Eigen::Index>(ops.n);
    if (mask & op_G) ops.G.resize(n, n);
    if (mask & op_H) ops.H.resize(n, n);
    if (mask & op_Hp) ops.Hp.resize(n, n);
    if (mask & op_E) ops.E.resize(n, n);

    const auto& elements = mesh.elements();
    std::atomic<Eigen::Index> next_row{0};
    std::mutex warn_mutex;
    std::exception_ptr failure;

    auto worker = [&]() {
        try {
            for (Eigen::Index i = next_row++; i < n; i = next_row++) {
                const Element& ei = elements[i];
                for (Eigen::Index j = 0; j < n; ++j) {
                    if (i == j) {
                        if (mask & op_G) ops.G(i, i) = self_term_G(ei, k, cfg);
                        if (mask & op_H) ops.H(i, i) = 0.0;
                        if (mask & op_Hp) ops.Hp(i, i) = 0.0;
                        if (mask & op_E) ops.E(i, i) = self_term_E(ei, k, cfg);
                        continue;
                    }
                    const PanelIntegrals p =
                        integrate_panel(ei.centroid, ei.normal, elements[j], k, cfg, mask);
                    if (mask & op_G) ops.G(i, j) = p.g;
                    if (mask & op_H) ops.H(i, j) = p.h;
                    if (mask & op_Hp) ops.Hp(i, j) = p.hp;
                    if (mask & op_E) ops.E(i, j) = p.e;
                    if (std::isfinite(p.min_ratio_at_depth_limit)) {
                        std::lock_guard lock(warn_mutex);
                        ops.warnings.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j),
                                                p.min_ratio_at_depth_limit});
                    }
                }
            }
        } catch (...) {
            std::lock_guard lock(warn_mutex);
            if (!failure) failure = std::current_exception();
            next_row = n;
        }
    };

    const unsigned nthreads = std::min<unsigned>(resolve_threads(threads), static_cast<unsigned>(n));
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);
    std::sort(ops.warnings.begin(), ops.warnings.end(),
              [](const QuadratureWarning& a, const QuadratureWarning& b) {
                  return a.row != b.row ? a.row < b.row : a.col < b.col;
              });
    ops.assembly_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return ops;
}

namespace {
constexpr char magic[8] = {'B', 'M', 'O', 'P', 'S', 'E', 'T', '1'};
}

void write_operator_set(const OperatorSet& ops, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    const std::uint64_t n = ops.n;
    const std::uint64_t cfg_hash = ops.config.hash();
    const std::uint32_t mask = ops.mask;
    out.write(magic, sizeof magic);
    out.write(reinterpret_cast<const char*>(&n), sizeof n);
    out.write(reinterpret_cast<const char*>(&ops.k), sizeof ops.k);
    out.write(reinterpret_cast<const char*>(&cfg_hash), sizeof cfg_hash);
    out.write(reinterpret_cast<const char*>(&mask), sizeof mask);
    for (auto [bit, m] : {std::pair{op_G, &ops.G}, {op_H, &ops.H}, {op_Hp, &ops.Hp}, {op_E, &ops.E}}) {
        if (!(ops.mask & bit)) continue;
        const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> row_major = *m;
        out.write(reinterpret_cast<const char*>(row_major.data()),
                  static_cast<std::streamsize>(row_major.size() * sizeof(cplx)));
    }
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

OperatorSet read_operator_set(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    char head[8];
    in.read(head, sizeof head);
    if (!in || std::memcmp(head, magic, sizeof magic) != 0) {
        throw std::runtime_error(path.string() + ": not an operator set dump");
    }
    std::uint64_t n = 0, cfg_hash = 0;
    std::uint32_t mask = 0;
    OperatorSet ops;
    in.read(reinterpret_cast<char*>(&n), sizeof n);
    in.read(reinterpret_cast<char*>(&ops.k), sizeof ops.k);
    in.read(reinterpret_cast<char*>(&cfg_hash), sizeof cfg_hash);
    in.read(reinterpret_cast<char*>(&mask), sizeof mask);
    if (!in) throw std::runtime_error(path.string() + ": truncated header");
    ops.n = n;
    ops.mask = mask & op_all;
    const auto dim = static_cast<Eigen::Index>(n);
    for (auto [bit, m] : {std::pair{op_G, &ops.G}, {op_H, &ops.H}, {op_Hp, &ops.Hp}, {op_E, &ops.E}}) {
        if (!(ops.mask & bit)) continue;
        Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> row_major(dim, dim);
        in.read(reinterpret_cast<char*>(row_major.data()),
                static_cast<std::streamsize>(row_major.size() * sizeof(cplx)));
        if (!in) throw std::runtime_error(path.string() + ": truncated matrix data");
        *m = row_major;
    }
    return ops;
}

}  // namespace bmbem
