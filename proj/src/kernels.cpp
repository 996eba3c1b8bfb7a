#include "bmbem/kernels.hpp"

namespace bmbem::kernels {

namespace {

double separation(const Vec3& x, const Vec3& y) {
    const double r = (x - y).norm();
    if (r == 0.0) throw SingularPoint();
    return r;
}

cplx green_at(double k, double r) { return std::exp(I * (k * r)) / (4.0 * pi * r); }

}  // namespace

cplx green(double k, const Vec3& x, const Vec3& y) { return green_at(k, separation(x, y)); }

cplx kernel_H(double k, const Vec3& x, const Vec3& y, const Vec3& n_y) {
    const double r = separation(x, y);
    return -green_at(k, r) * (I * k - 1.0 / r) * ((x - y).dot(n_y) / r);
}

cplx kernel_Hp(double k, const Vec3& x, const Vec3& y, const Vec3& n_x) {
    const double r = separation(x, y);
    return green_at(k, r) * (I * k - 1.0 / r) * ((x - y).dot(n_x) / r);
}

cplx kernel_E(double k, const Vec3& x, const Vec3& y, const Vec3& n_x, const Vec3& n_y) {
    const double r = separation(x, y);
    const Vec3 d = x - y;
    const double dr_dnx = d.dot(n_x) / r;
    const double dr_dny = -d.dot(n_y) / r;
    return green_at(k, r) * ((3.0 / (r * r) - 3.0 * I * k / r - k * k) * dr_dnx * dr_dny +
                             (1.0 / r) * (1.0 / r - I * k) * n_x.dot(n_y));
}

}  // namespace bmbem::kernels
