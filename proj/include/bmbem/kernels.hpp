#pragma once

// Helmholtz fundamental solution G = exp(ikr)/(4 pi r) and its normal
// derivatives. With rvec = x - y and r = |rvec|:
//   dr/dn_x =  rvec.n_x / r,   dr/dn_y = -rvec.n_y / r.
// All kernels are valid for k = 0 (Laplace).

#include <cmath>

#include "bmbem/common.hpp"

namespace bmbem::kernels {

/// Raised for pointwise evaluation at coincident points.
class SingularPoint : public DomainError {
public:
    SingularPoint() : DomainError("kernel evaluated at r = 0") {}
};

cplx green(double k, const Vec3& x, const Vec3& y);

/// dG/dn_y.
cplx kernel_H(double k, const Vec3& x, const Vec3& y, const Vec3& n_y);

/// dG/dn_x.
cplx kernel_Hp(double k, const Vec3& x, const Vec3& y, const Vec3& n_x);

/// d^2 G / dn_x dn_y.
cplx kernel_E(double k, const Vec3& x, const Vec3& y, const Vec3& n_x, const Vec3& n_y);

struct KernelValues {
    cplx g, h, hp, e;
};

/// All four kernels at one point pair, sharing the exponential. No r = 0
/// check; callers guarantee separation.
inline KernelValues evaluate_all(double k, const Vec3& x, const Vec3& y, const Vec3& n_x,
                                 const Vec3& n_y) {
    const Vec3 d = x - y;
    const double r2 = d.squaredNorm();
    const double r = std::sqrt(r2);
    const double inv_r = 1.0 / r;
    const double kr = k * r;
    const cplx g = cplx(std::cos(kr), std::sin(kr)) * (inv_r / (4.0 * pi));
    const double dnx = d.dot(n_x) * inv_r;  // dr/dn_x
    const double dny = -d.dot(n_y) * inv_r;  // dr/dn_y
    const cplx dg = g * cplx(-inv_r, k);     // dG/dr
    const cplx radial = cplx(3.0 * inv_r * inv_r - k * k, -3.0 * k * inv_r);
    const cplx tangential = cplx(inv_r * inv_r, -k * inv_r);
    return {g, dg * dny, dg * dnx, g * (radial * dnx * dny + tangential * n_x.dot(n_y))};
}

}  // namespace bmbem::kernels
