#include "ynet/nonlinear.hpp"

#include <cmath>

namespace ynet {

namespace {

void check_model(const NonlinearModel& m) {
    if (m.state_dim <= 0 || m.input_dim < 0 || m.output_dim < 0)
        throw InvalidArgument("nonlinear model dimensions must be positive");
    if (!m.f || !m.g) throw InvalidArgument("nonlinear model must provide f and g");
}

}  // namespace

StateSpace linearize(const NonlinearModel& model, const Eigen::VectorXd& x_star,
                     const Eigen::VectorXd& u_star, const LinearizeOptions& opts) {
    check_model(model);
    if (x_star.size() != model.state_dim || u_star.size() != model.input_dim)
        throw InvalidArgument("linearization point dimension mismatch");

    const double residual = model.f(x_star, u_star).norm();
    if (residual > opts.equilibrium_tol)
        throw NumericError("linearize: seed is not an equilibrium, |f(x*,u*)| = " +
                           std::to_string(residual));

    const int n = model.state_dim, m = model.input_dim, p = model.output_dim;
    Eigen::MatrixXd A(n, n), B(n, m), C(p, n), D(p, m);

    auto column = [&](auto&& fn, Eigen::VectorXd base, int i) {
        const double h = opts.fd_step_rel * (1.0 + std::abs(base(i)));
        Eigen::VectorXd hi = base, lo = base;
        hi(i) += h;
        lo(i) -= h;
        return Eigen::VectorXd(((fn(hi) - fn(lo)) / (2.0 * h)).eval());
    };

    for (int i = 0; i < n; ++i) {
        A.col(i) = column([&](const Eigen::VectorXd& x) { return model.f(x, u_star); }, x_star, i);
        C.col(i) = column([&](const Eigen::VectorXd& x) { return model.g(x, u_star); }, x_star, i);
    }
    for (int i = 0; i < m; ++i) {
        B.col(i) = column([&](const Eigen::VectorXd& u) { return model.f(x_star, u); }, u_star, i);
        D.col(i) = column([&](const Eigen::VectorXd& u) { return model.g(x_star, u); }, u_star, i);
    }
    return StateSpace(A, B, C, D);
}

Eigen::VectorXd find_equilibrium(const NonlinearModel& model, const Eigen::VectorXd& u0,
                                 const EquilibriumOptions& opts) {
    check_model(model);
    if (u0.size() != model.input_dim) throw InvalidArgument("equilibrium input dimension mismatch");

    Eigen::VectorXd x = model.x0;
    if (x.size() != model.state_dim)
        throw InvalidArgument("equilibrium seed dimension mismatch");

    double fnorm = model.f(x, u0).norm();
    for (int it = 0; it < opts.max_iterations; ++it) {
        if (fnorm <= opts.tol) return x;
        const Eigen::VectorXd fx = model.f(x, u0);

        Eigen::MatrixXd J(model.state_dim, model.state_dim);
        for (int i = 0; i < model.state_dim; ++i) {
            const double h = 1e-7 * (1.0 + std::abs(x(i)));
            Eigen::VectorXd hi = x, lo = x;
            hi(i) += h;
            lo(i) -= h;
            J.col(i) = (model.f(hi, u0) - model.f(lo, u0)) / (2.0 * h);
        }
        const Eigen::VectorXd step = J.fullPivLu().solve(-fx);
        if (!step.allFinite()) throw NumericError("equilibrium Newton step is not finite");

        // Backtracking damping on the residual norm.
        double alpha = 1.0;
        bool accepted = false;
        for (int bt = 0; bt < 8; ++bt) {
            const Eigen::VectorXd trial = x + alpha * step;
            const double tn = model.f(trial, u0).norm();
            if (tn < fnorm) {
                x = trial;
                fnorm = tn;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            x += alpha * step;  // take the smallest step anyway; next pass re-checks
            fnorm = model.f(x, u0).norm();
        }
    }
    if (fnorm <= opts.tol) return x;
    throw NumericError("equilibrium solve did not converge, residual " + std::to_string(fnorm));
}

}  // namespace ynet
