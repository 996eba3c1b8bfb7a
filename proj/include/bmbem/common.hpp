#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace bmbem {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

/// Speed of sound in m/s used for every frequency/wavenumber conversion.
inline constexpr double speed_of_sound = 340.0;
/// Fluid density in kg/m^3. Carried as run metadata only; the velocity
/// potential formulation never needs it.
inline constexpr double density = 1.3;

inline double wavenumber(double freq_hz) { return 2.0 * pi * freq_hz / speed_of_sound; }
inline double frequency(double k) { return k * speed_of_sound / (2.0 * pi); }

enum class BoundaryCondition { hard, soft };

std::string to_string(BoundaryCondition bc);
BoundaryCondition parse_boundary_condition(const std::string& s);

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// An iterative or series evaluation failed to reach its tolerance.
class NonConvergence : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace bmbem
