// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

namespace vfl {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

enum class ModelKind { lr, klr };

}  // namespace vfl
