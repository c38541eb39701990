#include "sampcent/dense_expm.hpp"

#include <cmath>

#include "sampcent/error.hpp"

namespace sampcent {

ExpPhi1 exp_and_phi1(const Eigen::MatrixXd& x) {
    if (x.rows() != x.cols()) {
        throw DimensionError("exp_and_phi1: matrix must be square");
    }
    const auto n = x.rows();
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
    if (!x.allFinite()) {
        throw NumericalError("exp_and_phi1: non-finite input");
    }
    const double norm = n == 0 ? 0.0 : x.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm > 0.5) {
        squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    }
    const Eigen::MatrixXd y = std::ldexp(1.0, -squarings) * x;

    // Horner form of phi1(Y) = I + Y/2 (I + Y/3 (I + ... )); remainder below 1e-20.
    constexpr int terms = 16;
    Eigen::MatrixXd phi = id;
    for (int k = terms; k >= 2; --k) {
        phi = id + (y * phi) / static_cast<double>(k);
    }
    Eigen::MatrixXd e = id + y * phi;

    for (int s = 0; s < squarings; ++s) {
        phi = 0.5 * (phi * (e + id));
        e = e * e;
    }
    if (!e.allFinite() || !phi.allFinite()) {
        throw NumericalError("exp_and_phi1: overflow");
    }
    return {std::move(e), std::move(phi)};
}

} // namespace sampcent
