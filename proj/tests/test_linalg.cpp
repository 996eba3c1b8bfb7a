#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <random>

#include "bmbem/linalg.hpp"

using namespace bmbem;
using namespace bmbem::linalg;

namespace {

CMatrix random_matrix(Eigen::Index n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    CMatrix a(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) a(i, j) = cplx(g(rng), g(rng));
    return a;
}

CMatrix random_unitary(Eigen::Index n, std::uint64_t seed) {
    Eigen::HouseholderQR<CMatrix> qr(random_matrix(n, seed));
    return qr.householderQ() * CMatrix::Identity(n, n);
}

double inf_norm(const CMatrix& a) { return a.cwiseAbs().rowwise().sum().maxCoeff(); }

}  // namespace

TEST_CASE("lu solve") {
    const CMatrix id = CMatrix::Identity(4, 4);
    const CVector b = CVector::LinSpaced(4, 1.0, 4.0);
    CHECK(lu_solve(lu_factor(id), b) == b);

    const CMatrix a = random_matrix(50, 1);
    const CVector rhs = random_matrix(50, 2).col(0);
    const auto f = lu_factor(a);
    CHECK(f.size() == 50);
    CHECK(f.norm_inf == doctest::Approx(inf_norm(a)).epsilon(1e-14));
    CHECK(norm_inf(a) == f.norm_inf);
    const CVector x = lu_solve(f, rhs);
    const CVector oracle = a.fullPivLu().solve(rhs);
    CHECK((x - oracle).cwiseAbs().maxCoeff() <= 1e-12 * oracle.cwiseAbs().maxCoeff());
    CHECK((a * x - rhs).cwiseAbs().maxCoeff() <= 1e-12 * rhs.cwiseAbs().maxCoeff());
    // adjoint and multiple right-hand sides
    const CVector xa = lu_solve(f, rhs, true);
    CHECK((a.adjoint() * xa - rhs).cwiseAbs().maxCoeff() <= 1e-12 * rhs.cwiseAbs().maxCoeff());
    const CMatrix B = random_matrix(50, 3).leftCols(5);
    const CMatrix X = lu_solve(f, B);
    CHECK((a * X - B).cwiseAbs().maxCoeff() <= 1e-12 * B.cwiseAbs().maxCoeff());
}

TEST_CASE("lu on an ill-conditioned matrix: small backward error") {
    const Eigen::Index n = 10;
    CMatrix h(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) h(i, j) = 1.0 / static_cast<double>(i + j + 1);
    const CVector b = CVector::Ones(n);
    const auto f = lu_factor(h);
    const CVector x = lu_solve(f, b);
    const double backward = inf_norm(h * x - b) / (inf_norm(h) * x.cwiseAbs().maxCoeff() + b.cwiseAbs().maxCoeff());
    CHECK(backward <= 1e-12);
    CHECK(cond_inf_estimate(f) > 1e12);
}

TEST_CASE("singular and invalid matrices") {
    CMatrix a = random_matrix(5, 4);
    a.col(2).setZero();
    a.row(2).setZero();
    try {
        lu_factor(a, "f = 170 Hz");
        FAIL("expected SingularMatrix");
    } catch (const SingularMatrix& e) {
        CHECK(std::string(e.what()).find("f = 170 Hz") != std::string::npos);
        CHECK(e.pivot() < 5);
    }
    CHECK_THROWS_AS(lu_factor(CMatrix::Zero(3, 3)), SingularMatrix);
    CHECK_THROWS_AS(lu_factor(CMatrix::Ones(2, 3)), std::invalid_argument);
    CMatrix nan = CMatrix::Identity(2, 2);
    nan(0, 1) = cplx(std::nan(""), 0.0);
    CHECK_THROWS_AS(lu_factor(nan), std::invalid_argument);
    CHECK_THROWS_AS(lu_solve(lu_factor(CMatrix::Identity(3, 3)), CVector(CVector::Ones(4))),
                    std::invalid_argument);
}

TEST_CASE("condition estimate") {
    CMatrix d = CMatrix::Identity(2, 2);
    d(1, 1) = 10.0;
    CHECK(cond_inf_estimate(lu_factor(d)) == doctest::Approx(10.0).epsilon(1e-14));
    for (std::uint64_t seed : {5u, 6u, 7u, 8u}) {
        const CMatrix a = random_matrix(80, seed);
        const double exact = inf_norm(a) * inf_norm(a.inverse());
        const double est = cond_inf_estimate(lu_factor(a));
        CHECK(est <= exact * (1.0 + 1e-10));
        CHECK(est >= exact / 3.0);
    }
}

TEST_CASE("singular values and 2-norm condition") {
    const CMatrix q = random_unitary(30, 9);
    CHECK(cond_2_exact(q) == doctest::Approx(1.0).epsilon(1e-12));
    CMatrix d = CMatrix::Zero(3, 3);
    d(0, 0) = 2.0;
    d(1, 1) = 1.0;
    d(2, 2) = 0.5;
    CHECK(cond_2_exact(d) == doctest::Approx(4.0).epsilon(1e-14));
    const CMatrix a = random_matrix(40, 10);
    const auto sv = singular_values(a);
    const Eigen::VectorXd oracle = Eigen::JacobiSVD<CMatrix>(a).singularValues();
    REQUIRE(sv.size() == 40);
    for (int i = 0; i < 40; ++i) CHECK(sv[static_cast<std::size_t>(i)] == doctest::Approx(oracle(i)).epsilon(1e-12));
    CHECK(std::is_sorted(sv.rbegin(), sv.rend()));
    CHECK_THROWS_AS(cond_2_exact(a, 39), std::length_error);
}

TEST_CASE("general eigenvalues") {
    const CMatrix a = random_matrix(40, 11);
    auto ev = eigenvalues(a);
    const Eigen::VectorXcd oracle = Eigen::ComplexEigenSolver<CMatrix>(a, false).eigenvalues();
    REQUIRE(ev.size() == 40);
    for (Eigen::Index i = 0; i < 40; ++i) {
        double best = 1e300;
        for (cplx v : ev) best = std::min(best, std::abs(v - oracle(i)));
        CHECK(best <= 1e-10 * std::abs(oracle(i)));
    }
    CHECK_THROWS_AS(eigenvalues(CMatrix::Ones(2, 3)), std::invalid_argument);
}

TEST_CASE("hermitian-definite pencil") {
    CMatrix a = CMatrix::Zero(2, 2), b = CMatrix::Zero(2, 2);
    a(0, 0) = 2.0;
    a(1, 1) = 6.0;
    b(0, 0) = 1.0;
    b(1, 1) = 2.0;
    const auto mu = generalized_hermitian_eigenvalues(a, b);
    CHECK(mu[0] == doctest::Approx(2.0));
    CHECK(mu[1] == doctest::Approx(3.0));

    const CMatrix m = random_matrix(30, 12);
    const CMatrix herm = m + m.adjoint();
    const CMatrix r = random_matrix(30, 13);
    const CMatrix pd = r.adjoint() * r + CMatrix::Identity(30, 30);
    const auto got = generalized_hermitian_eigenvalues(herm, pd);
    Eigen::GeneralizedSelfAdjointEigenSolver<CMatrix> es(herm, pd, Eigen::EigenvaluesOnly);
    for (int i = 0; i < 30; ++i) {
        CHECK(got[static_cast<std::size_t>(i)] ==
              doctest::Approx(es.eigenvalues()(i)).epsilon(1e-10).scale(1.0));
    }
    CHECK_THROWS_AS(generalized_hermitian_eigenvalues(herm, -pd), std::domain_error);
    CHECK_THROWS_AS(generalized_hermitian_eigenvalues(herm, CMatrix::Identity(3, 3)), std::invalid_argument);
}

TEST_CASE("block subspace iteration") {
    const Eigen::Index n = 200;
    // normal: unitary similarity of a known spectrum
    Eigen::VectorXcd d(n);
    for (Eigen::Index i = 0; i < n; ++i) d(i) = i < 10 ? cplx(10.0 - i, 0.3 * i) : cplx(0.5 / (1 + i), 0.0);
    const CMatrix q = random_unitary(n, 14);
    const CMatrix a = q * d.asDiagonal() * q.adjoint();
    const auto res = subspace_iteration([&](const CMatrix& x) { return CMatrix(a * x); }, n, 12, 6);
    CHECK(res.converged);
    REQUIRE(res.ritz.size() == 12);
    for (int i = 0; i < 6; ++i) {
        CHECK(std::abs(res.ritz[static_cast<std::size_t>(i)] - d(i)) <= 1e-8 * std::abs(d(i)));
    }
    // non-normal: well-conditioned similarity
    CMatrix s = random_matrix(n, 15) / std::sqrt(static_cast<double>(n));
    s.diagonal().array() += 3.0;
    const CMatrix b = s * d.asDiagonal() * s.inverse();
    const auto rb = subspace_iteration([&](const CMatrix& x) { return CMatrix(b * x); }, n, 12, 6);
    CHECK(rb.converged);
    for (int i = 0; i < 6; ++i) {
        CHECK(std::abs(rb.ritz[static_cast<std::size_t>(i)] - d(i)) <= 1e-7 * std::abs(d(i)));
    }
    // fixed seed: repeated runs agree bit for bit
    const auto again = subspace_iteration([&](const CMatrix& x) { return CMatrix(a * x); }, n, 12, 6);
    CHECK(again.ritz == res.ritz);
    CHECK(again.iterations == res.iterations);
    CHECK_THROWS_AS(subspace_iteration([&](const CMatrix& x) { return CMatrix(a * x); }, n, 0, 1),
                    std::invalid_argument);
    // an iteration cap that is too small is reported, not hidden
    const auto capped = subspace_iteration([&](const CMatrix& x) { return CMatrix(b * x); }, n, 12, 6, 1);
    CHECK_FALSE(capped.converged);
}
