#include "bmbem/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace bmbem::linalg {

static_assert(sizeof(lapack_int) == sizeof(int), "LP64 LAPACK expected");

double norm_inf(const CMatrix& a) {
    if (a.size() == 0) return 0.0;
    return a.cwiseAbs().rowwise().sum().maxCoeff();
}

LUFactors lu_factor(CMatrix a, const std::string& context) {
    if (a.rows() != a.cols()) throw std::invalid_argument("lu_factor: matrix is not square");
    if (!a.allFinite()) throw std::invalid_argument("lu_factor: non-finite entries");
    LUFactors f;
    f.norm_inf = norm_inf(a);
    const auto n = static_cast<lapack_int>(a.rows());
    f.ipiv.resize(static_cast<std::size_t>(n));
    const lapack_int info = LAPACKE_zgetrf(LAPACK_COL_MAJOR, n, n, a.data(), n, f.ipiv.data());
    if (info < 0) throw std::runtime_error("zgetrf: illegal argument " + std::to_string(-info));
    if (info > 0) throw SingularMatrix(static_cast<std::size_t>(info - 1), context);
    f.lu = std::move(a);
    return f;
}

CMatrix lu_solve(const LUFactors& f, const CMatrix& b, bool adjoint) {
    if (b.rows() != f.size()) throw std::invalid_argument("lu_solve: dimension mismatch");
    CMatrix x = b;
    const auto n = static_cast<lapack_int>(f.size());
    const lapack_int info =
        LAPACKE_zgetrs(LAPACK_COL_MAJOR, adjoint ? 'C' : 'N', n, static_cast<lapack_int>(x.cols()),
                       f.lu.data(), n, f.ipiv.data(), x.data(), n);
    if (info != 0) throw std::runtime_error("zgetrs failed with info " + std::to_string(info));
    return x;
}

CVector lu_solve(const LUFactors& f, const CVector& b, bool adjoint) {
    return lu_solve(f, CMatrix(b), adjoint).col(0);
}

double cond_inf_estimate(const LUFactors& f) {
    if (f.size() == 0) return 0.0;
    const auto n = static_cast<lapack_int>(f.size());
    double rcond = 0.0;
    const lapack_int info =
        LAPACKE_zgecon(LAPACK_COL_MAJOR, 'I', n, f.lu.data(), n, f.norm_inf, &rcond);
    if (info != 0) throw std::runtime_error("zgecon failed with info " + std::to_string(info));
    if (rcond == 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / rcond;
}

std::vector<double> singular_values(const CMatrix& a) {
    CMatrix work = a;
    const auto m = static_cast<lapack_int>(a.rows());
    const auto n = static_cast<lapack_int>(a.cols());
    std::vector<double> s(static_cast<std::size_t>(std::min(m, n)));
    const lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', m, n, work.data(), m, s.data(),
                                           nullptr, 1, nullptr, 1);
    if (info != 0) throw NonConvergence("zgesdd failed with info " + std::to_string(info));
    return s;
}

double cond_2_exact(const CMatrix& a, Eigen::Index cap) {
    if (a.rows() > cap || a.cols() > cap) {
        throw std::length_error("cond_2_exact: size " + std::to_string(a.rows()) +
                                " exceeds cap " + std::to_string(cap));
    }
    const auto s = singular_values(a);
    if (s.empty()) return 0.0;
    if (s.back() == 0.0) return std::numeric_limits<double>::infinity();
    return s.front() / s.back();
}

std::vector<cplx> eigenvalues(const CMatrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("eigenvalues: matrix is not square");
    CMatrix work = a;
    const auto n = static_cast<lapack_int>(a.rows());
    std::vector<cplx> w(static_cast<std::size_t>(n));
    const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, work.data(), n, w.data(),
                                          nullptr, 1, nullptr, 1);
    if (info != 0) throw NonConvergence("zgeev failed with info " + std::to_string(info));
    return w;
}

std::vector<double> generalized_hermitian_eigenvalues(const CMatrix& a, const CMatrix& b) {
    if (a.rows() != a.cols() || b.rows() != a.rows() || b.cols() != a.cols()) {
        throw std::invalid_argument("generalized_hermitian_eigenvalues: dimension mismatch");
    }
    CMatrix wa = a;
    CMatrix wb = b;
    const auto n = static_cast<lapack_int>(a.rows());
    std::vector<double> w(static_cast<std::size_t>(n));
    const lapack_int info =
        LAPACKE_zhegv(LAPACK_COL_MAJOR, 1, 'N', 'L', n, wa.data(), n, wb.data(), n, w.data());
    if (info > n) throw std::domain_error("zhegv: second matrix is not positive definite");
    if (info != 0) throw NonConvergence("zhegv failed with info " + std::to_string(info));
    return w;
}

namespace {

CMatrix orthonormalize(const CMatrix& z) {
    Eigen::HouseholderQR<CMatrix> qr(z);
    return qr.householderQ() * CMatrix::Identity(z.rows(), z.cols());
}

void sort_by_magnitude(std::vector<cplx>& v) {
    std::sort(v.begin(), v.end(), [](cplx a, cplx b) { return std::abs(a) > std::abs(b); });
}

}  // namespace

SubspaceResult subspace_iteration(const BlockOperator& op, Eigen::Index n, Eigen::Index block,
                                  Eigen::Index wanted, int max_iter, double tol) {
    if (block < 1 || block > n) throw std::invalid_argument("subspace_iteration: bad block size");
    wanted = std::clamp<Eigen::Index>(wanted, 1, block);

    std::mt19937_64 rng(20240611);
    std::normal_distribution<double> normal;
    CMatrix q(n, block);
    for (Eigen::Index j = 0; j < block; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) q(i, j) = cplx(normal(rng), normal(rng));
    }
    q = orthonormalize(q);

    SubspaceResult result{{}, 0, false};
    std::vector<cplx> previous;
    for (int it = 1; it <= max_iter; ++it) {
        const CMatrix z = op(q);
        const CMatrix projected = q.adjoint() * z;
        std::vector<cplx> ritz = eigenvalues(projected);
        sort_by_magnitude(ritz);
        result.iterations = it;
        if (!previous.empty()) {
            double change = 0.0;
            for (Eigen::Index i = 0; i < wanted; ++i) {
                // nearest previous value, since ordering can swap inside a cluster
                double best = std::numeric_limits<double>::infinity();
                for (Eigen::Index j = 0; j < wanted; ++j) best = std::min(best, std::abs(ritz[i] - previous[j]));
                change = std::max(change, best / std::abs(ritz[i]));
            }
            if (change < tol) {
                result.ritz = std::move(ritz);
                result.converged = true;
                return result;
            }
        }
        previous = ritz;
        result.ritz = std::move(ritz);
        q = orthonormalize(z);
    }
    return result;
}

}  // namespace bmbem::linalg
