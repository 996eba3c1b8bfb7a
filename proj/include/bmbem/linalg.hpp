#pragma once

// Dense complex linear algebra on top of LAPACK: LU with retained factors,
// condition numbers and eigenvalues.

#include <functional>
#include <string>
#include <vector>

#include "bmbem/common.hpp"

namespace bmbem::linalg {

/// Exactly zero pivot in the LU factorization.
class SingularMatrix : public std::runtime_error {
public:
    SingularMatrix(std::size_t pivot, const std::string& context)
        : std::runtime_error("singular matrix: zero pivot at " + std::to_string(pivot) +
                             (context.empty() ? "" : " (" + context + ")")),
          pivot_(pivot) {}
    std::size_t pivot() const { return pivot_; }

private:
    std::size_t pivot_;
};

/// Partial-pivoting LU factors of a square matrix, together with the
/// infinity norm of the original matrix.
struct LUFactors {
    CMatrix lu;
    std::vector<int> ipiv;
    double norm_inf = 0.0;

    Eigen::Index size() const { return lu.rows(); }
};

double norm_inf(const CMatrix& a);

/// zgetrf. context is appended to the error message (e.g. the frequency).
LUFactors lu_factor(CMatrix a, const std::string& context = {});

/// Solves A x = b, or A^H x = b when adjoint is set. b may have several columns.
CMatrix lu_solve(const LUFactors& f, const CMatrix& b, bool adjoint = false);
CVector lu_solve(const LUFactors& f, const CVector& b, bool adjoint = false);

/// Estimate of ||A||_inf ||A^-1||_inf from the factors (Hager-Higham
/// estimator of ||A^-1||_inf, as in zgecon). Returns +inf for a singular
/// estimate.
double cond_inf_estimate(const LUFactors& f);

/// Singular values, descending (zgesdd, values only).
std::vector<double> singular_values(const CMatrix& a);

inline constexpr Eigen::Index default_svd_cap = 2000;

/// sigma_max / sigma_min; throws std::length_error above the size cap.
double cond_2_exact(const CMatrix& a, Eigen::Index cap = default_svd_cap);

/// All eigenvalues of a general complex matrix (zgeev, no vectors).
std::vector<cplx> eigenvalues(const CMatrix& a);

/// Eigenvalues (ascending) of the Hermitian-definite pencil a x = mu b x,
/// b positive definite (zhegv).
std::vector<double> generalized_hermitian_eigenvalues(const CMatrix& a, const CMatrix& b);

/// Applies an operator to a block of column vectors.
using BlockOperator = std::function<CMatrix(const CMatrix&)>;

struct SubspaceResult {
    std::vector<cplx> ritz;  // Ritz values of op, descending magnitude
    int iterations;
    bool converged;
};

/// Block subspace iteration with Rayleigh-Ritz projection: approximates the
/// `block` eigenvalues of op with largest magnitude. Convergence is declared
/// when the leading `wanted` Ritz values change by less than tol (relative).
/// The start block is pseudo-random with a fixed seed.
SubspaceResult subspace_iteration(const BlockOperator& op, Eigen::Index n, Eigen::Index block,
                                  Eigen::Index wanted, int max_iter = 300, double tol = 1e-10);

}  // namespace bmbem::linalg
