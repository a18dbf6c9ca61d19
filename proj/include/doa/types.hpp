#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace doa {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;

/// Raised when a matrix expected to have full column rank does not.
struct RankError : std::runtime_error {
    explicit RankError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace doa
