#include "pslepian/covariance.hpp"

#include "pslepian/error.hpp"
#include "pslepian/simulate.hpp"

namespace pslepian {

namespace {

Eigen::Map<const Eigen::VectorXd> as_vector(std::span<const double> v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

} // namespace

SlepianCovariance::SlepianCovariance(const TimeGrid& grid) : grid_(grid) {
    const int k = grid.lag_cells();
    const int n = grid.window_nodes();
    sigma_.resize(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const double c = slepian_cov(grid.node(k + i), grid.node(k + j), grid.p());
            sigma_(i, j) = c;
            sigma_(j, i) = c;
        }
    }
    llt_.compute(sigma_);
    if (llt_.info() != Eigen::Success)
        throw NumericalError("Cholesky factorization of the window covariance failed");
    lower_ = llt_.matrixL();
}

double SlepianCovariance::reconstruction_error() const {
    return (lower_ * lower_.transpose() - sigma_).cwiseAbs().maxCoeff();
}

Eigen::VectorXd SlepianCovariance::solve(std::span<const double> rhs) const {
    require(static_cast<int>(rhs.size()) == size(), "covariance solve: vector length does not match the window");
    return llt_.solve(as_vector(rhs));
}

double SlepianCovariance::bilinear(std::span<const double> x, std::span<const double> y) const {
    require(static_cast<int>(y.size()) == size(), "covariance bilinear: vector length does not match the window");
    return as_vector(y).dot(solve(x));
}

double SlepianCovariance::quad_form(std::span<const double> x) const {
    require(static_cast<int>(x.size()) == size(), "covariance quad_form: vector length does not match the window");
    // |L^{-1} x|^2 keeps the form nonnegative under rounding
    const Eigen::VectorXd y = llt_.matrixL().solve(as_vector(x));
    return y.squaredNorm();
}

void SlepianCovariance::correlate(std::span<const double> xi, std::span<double> out) const {
    require(static_cast<int>(xi.size()) == size() && static_cast<int>(out.size()) == size(),
            "covariance correlate: vector length does not match the window");
    Eigen::Map<Eigen::VectorXd> dst(out.data(), size());
    dst.noalias() = lower_.triangularView<Eigen::Lower>() * as_vector(xi);
}

} // namespace pslepian
