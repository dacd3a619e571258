#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>

namespace bandsurf {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Wraps every coordinate into [0,1).
inline double wrap_unit(double v) {
    double w = v - std::floor(v);
    return w >= 1.0 ? 0.0 : w;
}

} // namespace bandsurf
