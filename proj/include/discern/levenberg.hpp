#pragma once

#include <Eigen/Dense>
#include <functional>

namespace discern {

struct LMOptions {
    int max_iterations = 500;
    double tol_residual = 1e-10;   // infinity-norm target on the residual
    double lambda_start = 1e-3;    // x10 on a rejected step, /10 on an accepted one
    double lambda_max = 1e12;
    double min_step = 1e-15;
};

struct LMOutcome {
    Eigen::VectorXd x;
    double residual_inf = 0.0;
    bool converged = false;
    int iterations = 0;
};

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using JacobianFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

inline Eigen::MatrixXd finite_difference_jacobian(const ResidualFn& residual,
                                                  const Eigen::VectorXd& x) {
    const Eigen::VectorXd r0 = residual(x);
    Eigen::MatrixXd J(r0.size(), x.size());
    Eigen::VectorXd xp = x, xm = x;
    for (int j = 0; j < x.size(); ++j) {
        const double h = 1e-7 * std::max(1.0, std::abs(x[j]));
        xp[j] = x[j] + h;
        xm[j] = x[j] - h;
        J.col(j) = (residual(xp) - residual(xm)) / (2.0 * h);
        xp[j] = x[j];
        xm[j] = x[j];
    }
    return J;
}

// Damped Gauss-Newton with Levenberg regularization; the ridge term also
// yields near-minimum-norm steps on underdetermined systems.
inline LMOutcome levenberg_least_squares(const ResidualFn& residual,
                                         const JacobianFn& jacobian,
                                         Eigen::VectorXd x, const LMOptions& opts = {}) {
    LMOutcome out;
    Eigen::VectorXd r = residual(x);
    double lambda = opts.lambda_start;
    int iter = 0;
    for (; iter < opts.max_iterations; ++iter) {
        if (r.lpNorm<Eigen::Infinity>() < opts.tol_residual) break;
        const Eigen::MatrixXd J =
            jacobian ? jacobian(x) : finite_difference_jacobian(residual, x);
        const Eigen::MatrixXd JtJ = J.transpose() * J;
        const Eigen::VectorXd g = J.transpose() * r;
        bool accepted = false;
        for (int attempt = 0; attempt < 25 && lambda <= opts.lambda_max; ++attempt) {
            Eigen::MatrixXd A = JtJ;
            A.diagonal().array() += lambda;
            const Eigen::VectorXd step = A.ldlt().solve(-g);
            const Eigen::VectorXd x2 = x + step;
            const Eigen::VectorXd r2 = residual(x2);
            if (r2.squaredNorm() < r.squaredNorm()) {
                x = x2;
                r = r2;
                lambda = std::max(lambda / 10.0, 1e-14);
                accepted = true;
                if (step.lpNorm<Eigen::Infinity>() < opts.min_step) iter = opts.max_iterations;
                break;
            }
            lambda *= 10.0;
        }
        if (!accepted) break;
    }
    out.x = std::move(x);
    out.residual_inf = r.lpNorm<Eigen::Infinity>();
    out.converged = out.residual_inf < opts.tol_residual;
    out.iterations = iter;
    return out;
}

}  // namespace discern
