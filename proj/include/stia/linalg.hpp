// Copyright 2026 The STIA Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

namespace stia {

/// Ratio of largest to smallest singular value; +inf for a singular matrix.
double condition_number(const Eigen::MatrixXcd& m);
double condition_number(const Eigen::MatrixXd& m);

/// Solves m x = rhs after rejecting matrices whose condition number exceeds
/// `max_condition` (throws SingularMatrixError). Returns the condition number
/// via `condition_out` when non-null.
Eigen::VectorXcd checked_solve(const Eigen::MatrixXcd& m, const Eigen::VectorXcd& rhs,
                               double max_condition, double* condition_out = nullptr);

}  // namespace stia
