#pragma once

#include <Eigen/Dense>

namespace sampcent {

/// exp(X) together with phi1(X) = sum_k X^k / (k+1)!, so that exp(X) = I + X phi1(X).
struct ExpPhi1 {
    Eigen::MatrixXd exp;
    Eigen::MatrixXd phi1;
};

/// Scaling and squaring with a truncated Taylor base on ||X||_1 <= 1/2 and the
/// doubling rules exp(2Y) = exp(Y)^2, phi1(2Y) = phi1(Y) (exp(Y) + I) / 2.
ExpPhi1 exp_and_phi1(const Eigen::MatrixXd& x);

} // namespace sampcent
