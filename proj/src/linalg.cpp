// Copyright 2026 The STIA Authors
// SPDX-License-Identifier: Apache-2.0

#include "stia/linalg.hpp"

#include <limits>
#include <sstream>

#include "stia/errors.hpp"

namespace stia {

namespace {

template <class Matrix>
double condition_impl(const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return 1.0;
    const double smallest = sv(sv.size() - 1);
    if (!(smallest > 0.0)) return std::numeric_limits<double>::infinity();
    return sv(0) / smallest;
}

}  // namespace

double condition_number(const Eigen::MatrixXcd& m) { return condition_impl(m); }
double condition_number(const Eigen::MatrixXd& m) { return condition_impl(m); }

Eigen::VectorXcd checked_solve(const Eigen::MatrixXcd& m, const Eigen::VectorXcd& rhs,
                               double max_condition, double* condition_out) {
    const double cond = condition_number(m);
    if (condition_out) *condition_out = cond;
    if (!(cond <= max_condition)) {
        std::ostringstream msg;
        msg << "effective matrix is numerically singular (condition " << cond << ")";
        throw SingularMatrixError(msg.str(), cond);
    }
    return m.colPivHouseholderQr().solve(rhs);
}

}  // namespace stia
