#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace rftrack {

/// Task-space dimension. The arm moves in a plane.
inline constexpr int kTaskDim = 2;

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using TaskVec = Eigen::Vector2d;
using TaskMat = Eigen::Matrix2d;
using TaskRow = Eigen::RowVector2d;
using TaskJacobian = Eigen::Matrix<double, kTaskDim, Eigen::Dynamic>;

/// Thrown when a caller breaks a documented precondition (dimension
/// mismatch, invalid physical parameter, non-diagonal gain matrix, ...).
class ContractViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// True when every off-diagonal entry is exactly zero.
inline bool is_diagonal(const TaskMat& m) { return m(0, 1) == 0.0 && m(1, 0) == 0.0; }

}  // namespace rftrack
