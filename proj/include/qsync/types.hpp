#pragma once

#include <complex>

#include <Eigen/Dense>

namespace qsync {

using Complex = std::complex<double>;

using Mat3 = Eigen::Matrix3cd;
using Vec3 = Eigen::Vector3cd;
using Mat9 = Eigen::Matrix<Complex, 9, 9>;
using Vec9 = Eigen::Matrix<Complex, 9, 1>;

}  // namespace qsync
