#include <doctest.h>

#include <cmath>
#include <random>

#include "bmbem/kernels.hpp"
#include "reference_values.hpp"

using namespace bmbem;
using namespace bmbem::kernels;

namespace {

Vec3 random_unit(std::mt19937_64& rng) {
    std::normal_distribution<double> n;
    Vec3 v(n(rng), n(rng), n(rng));
    return v.normalized();
}

// Laplace kernels written out independently
double static_g(const Vec3& x, const Vec3& y) { return 1.0 / (4.0 * pi * (x - y).norm()); }
double static_h(const Vec3& x, const Vec3& y, const Vec3& ny) {
    const Vec3 d = x - y;
    return d.dot(ny) / (4.0 * pi * std::pow(d.norm(), 3));
}
double static_e(const Vec3& x, const Vec3& y, const Vec3& nx, const Vec3& ny) {
    const Vec3 d = x - y;
    const double r = d.norm();
    return (nx.dot(ny) - 3.0 * d.dot(nx) * d.dot(ny) / (r * r)) / (4.0 * pi * r * r * r);
}

}  // namespace

TEST_CASE("green's function values") {
    const Vec3 x(0, 0, 0), y(1, 0, 0);
    CHECK(std::abs(green(1.0, x, y) - std::exp(I) / (4.0 * pi)) <= 1e-16);
    const cplx g = green(2.0, Vec3(0, 0, 0), Vec3(0.3, 0.4, 0.0));
    CHECK(std::abs(g - ref::green_k2_r05) <= 1e-15 * std::abs(ref::green_k2_r05));
    std::mt19937_64 rng(7);
    for (int i = 0; i < 20; ++i) {
        const Vec3 a = random_unit(rng), b = 2.0 * random_unit(rng);
        CHECK(green(1.7, a, b) == green(1.7, b, a));
    }
    CHECK_THROWS_AS(green(1.0, x, x), SingularPoint);
    CHECK_THROWS_AS(kernel_H(1.0, x, x, Vec3(0, 0, 1)), SingularPoint);
    CHECK_THROWS_AS(kernel_Hp(1.0, x, x, Vec3(0, 0, 1)), SingularPoint);
    CHECK_THROWS_AS(kernel_E(1.0, x, x, Vec3(0, 0, 1), Vec3(0, 0, 1)), SingularPoint);
}

TEST_CASE("normal derivative kernels vanish for tangential separation") {
    const Vec3 x(0, 0, 0), y(0.3, -0.2, 0.0), n(0, 0, 1);
    CHECK(kernel_H(2.0, x, y, n) == cplx(0.0));
    CHECK(kernel_Hp(2.0, x, y, n) == cplx(0.0));
}

TEST_CASE("finite-difference oracles at the nominal configurations") {
    const double k = 1.0;
    {
        const Vec3 x(0, 0, 0), y(0.3, 0.4, 0.0);  // r = 0.5
        const Vec3 ny = Vec3(1, 2, 2).normalized(), nx = Vec3(-2, 1, 0.5).normalized();
        const double h = 1e-6;
        const cplx fd_h = (green(k, x, y + h * ny) - green(k, x, y - h * ny)) / (2 * h);
        const cplx fd_hp = (green(k, x + h * nx, y) - green(k, x - h * nx, y)) / (2 * h);
        CHECK(std::abs(kernel_H(k, x, y, ny) - fd_h) <= 1e-6 * std::abs(fd_h));
        CHECK(std::abs(kernel_Hp(k, x, y, nx) - fd_hp) <= 1e-6 * std::abs(fd_hp));
    }
    {
        const Vec3 x(0.1, 0, 0), y(0.1, 0.7, 0.0);  // r = 0.7
        const Vec3 nx = Vec3(0.3, 1, 0.2).normalized(), ny = Vec3(0.5, -1, 0.7).normalized();
        const double h = 1e-4;
        const cplx fd = (green(k, x + h * nx, y + h * ny) - green(k, x + h * nx, y - h * ny) -
                         green(k, x - h * nx, y + h * ny) + green(k, x - h * nx, y - h * ny)) /
                        (4 * h * h);
        CHECK(std::abs(kernel_E(k, x, y, nx, ny) - fd) <= 1e-5 * std::abs(fd));
    }
}

TEST_CASE("finite-difference consistency over random configurations") {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> r_dist(0.3, 2.0), k_dist(0.1, 5.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double k = k_dist(rng);
        const Vec3 x = random_unit(rng);
        const Vec3 y = x + r_dist(rng) * random_unit(rng);
        const Vec3 nx = random_unit(rng), ny = random_unit(rng);
        const double r = (x - y).norm();
        // scale by the kernel size so near-zero projections do not dominate
        const double scale1 = std::abs(green(k, x, y)) * (k + 1.0 / r);
        const double scale2 = scale1 * (k + 1.0 / r);
        const double h1 = 1e-6;
        const cplx fd_h = (green(k, x, y + h1 * ny) - green(k, x, y - h1 * ny)) / (2 * h1);
        const cplx fd_hp = (green(k, x + h1 * nx, y) - green(k, x - h1 * nx, y)) / (2 * h1);
        const double h2 = 1e-4;
        const cplx fd_e = (green(k, x + h2 * nx, y + h2 * ny) - green(k, x + h2 * nx, y - h2 * ny) -
                           green(k, x - h2 * nx, y + h2 * ny) + green(k, x - h2 * nx, y - h2 * ny)) /
                          (4 * h2 * h2);
        CAPTURE(trial);
        CHECK(std::abs(kernel_H(k, x, y, ny) - fd_h) <= 1e-6 * scale1);
        CHECK(std::abs(kernel_Hp(k, x, y, nx) - fd_hp) <= 1e-6 * scale1);
        CHECK(std::abs(kernel_E(k, x, y, nx, ny) - fd_e) <= 1e-5 * scale2);
    }
}

TEST_CASE("swap and exchange identities") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const double k = 0.5 + trial * 0.05;
        const Vec3 x = random_unit(rng), y = 1.5 * random_unit(rng);
        const Vec3 n1 = random_unit(rng), n2 = random_unit(rng);
        const cplx h = kernel_H(k, x, y, n1);
        CHECK(std::abs(h - kernel_Hp(k, y, x, n1)) <= 1e-14 * std::abs(h));
        const cplx e = kernel_E(k, x, y, n1, n2);
        CHECK(std::abs(e - kernel_E(k, y, x, n2, n1)) <= 1e-14 * std::abs(e));
    }
}

TEST_CASE("fused evaluation matches the individual kernels") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const Vec3 x = random_unit(rng), y = 0.4 * random_unit(rng);
        const Vec3 nx = random_unit(rng), ny = random_unit(rng);
        const double k = 0.2 * trial;
        const KernelValues v = evaluate_all(k, x, y, nx, ny);
        CHECK(std::abs(v.g - green(k, x, y)) <= 1e-14 * std::abs(v.g));
        CHECK(std::abs(v.h - kernel_H(k, x, y, ny)) <= 1e-13 * std::abs(v.g) / (x - y).norm());
        CHECK(std::abs(v.hp - kernel_Hp(k, x, y, nx)) <= 1e-13 * std::abs(v.g) / (x - y).norm());
        CHECK(std::abs(v.e - kernel_E(k, x, y, nx, ny)) <= 1e-13 * std::abs(v.g) / (x - y).squaredNorm());
    }
}

TEST_CASE("static limit") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const Vec3 x = random_unit(rng), y = 0.8 * random_unit(rng);
        const Vec3 nx = random_unit(rng), ny = random_unit(rng);
        for (double k : {0.0, 1e-8}) {
            CHECK(std::abs(green(k, x, y) - static_g(x, y)) <= 1e-6 * static_g(x, y));
            const double sh = static_h(x, y, ny);
            const double se = static_e(x, y, nx, ny);
            const double scale = static_g(x, y) / (x - y).norm();
            CHECK(std::abs(kernel_H(k, x, y, ny) - sh) <= 1e-6 * scale);
            CHECK(std::abs(kernel_E(k, x, y, nx, ny) - se) <= 1e-6 * scale / (x - y).norm());
        }
    }
}
