#pragma once

#include "pslepian/grid.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <memory>
#include <span>

namespace pslepian {

/**
 * Covariance of the p-Slepian process at the window nodes t_k..t_m together
 * with its Cholesky factor. Sigma^{-1} is never formed; every solve goes
 * through the factor. Immutable once built.
 */
class SlepianCovariance {
public:
    explicit SlepianCovariance(const TimeGrid& grid);

    const TimeGrid& grid() const { return grid_; }
    int size() const { return static_cast<int>(sigma_.rows()); }
    const Eigen::MatrixXd& matrix() const { return sigma_; }
    Eigen::MatrixXd lower() const { return llt_.matrixL(); }

    // max |L L^T - Sigma|
    double reconstruction_error() const;

    Eigen::VectorXd solve(std::span<const double> rhs) const;
    // x^T Sigma^{-1} y
    double bilinear(std::span<const double> x, std::span<const double> y) const;
    double quad_form(std::span<const double> x) const;

    // out = L * xi
    void correlate(std::span<const double> xi, std::span<double> out) const;

private:
    TimeGrid grid_;
    Eigen::MatrixXd sigma_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
    Eigen::MatrixXd lower_;
};

} // namespace pslepian
