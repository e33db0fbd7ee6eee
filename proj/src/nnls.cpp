#include "declutter/nnls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "declutter/error.hpp"

namespace declutter {
namespace {

// Unconstrained least squares restricted to the passive columns.
Eigen::VectorXd solve_passive(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const std::vector<bool>& passive) {
    const Eigen::Index n = A.cols();
    std::vector<Eigen::Index> cols;
    for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)]) cols.push_back(j);
    }
    Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
    if (cols.empty()) return z;
    Eigen::MatrixXd sub(A.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = A.col(cols[k]);
    const Eigen::VectorXd zs = sub.colPivHouseholderQr().solve(b);
    for (std::size_t k = 0; k < cols.size(); ++k) z(cols[k]) = zs(static_cast<Eigen::Index>(k));
    return z;
}

}  // namespace

NnlsResult nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, int max_iterations) {
    if (A.rows() != b.size()) throw Error(ErrorCode::InvalidArgument, "nnls: row count mismatch");
    const Eigen::Index n = A.cols();
    if (max_iterations <= 0) max_iterations = static_cast<int>(30 * n + 30);
    const double tol = 10.0 * std::numeric_limits<double>::epsilon() * A.cwiseAbs().maxCoeff() *
                       static_cast<double>(std::max(A.rows(), n));

    NnlsResult out;
    out.x = Eigen::VectorXd::Zero(n);
    std::vector<bool> passive(static_cast<std::size_t>(n), false);
    Eigen::VectorXd w = A.transpose() * (b - A * out.x);

    while (out.iterations < max_iterations) {
        Eigen::Index best = -1;
        double wmax = tol;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (!passive[static_cast<std::size_t>(j)] && w(j) > wmax) {
                wmax = w(j);
                best = j;
            }
        }
        if (best < 0) break;
        passive[static_cast<std::size_t>(best)] = true;

        for (;;) {
            ++out.iterations;
            Eigen::VectorXd z = solve_passive(A, b, passive);
            bool feasible = true;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0) feasible = false;
            }
            if (feasible) {
                out.x = z;
                break;
            }
            // Step toward z until the first passive coordinate hits zero.
            double alpha = std::numeric_limits<double>::infinity();
            for (Eigen::Index j = 0; j < n; ++j) {
                if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0) {
                    alpha = std::min(alpha, out.x(j) / (out.x(j) - z(j)));
                }
            }
            out.x += alpha * (z - out.x);
            for (Eigen::Index j = 0; j < n; ++j) {
                if (passive[static_cast<std::size_t>(j)] && std::abs(out.x(j)) <= tol) {
                    passive[static_cast<std::size_t>(j)] = false;
                    out.x(j) = 0.0;
                }
            }
            if (out.iterations >= max_iterations) break;
        }
        w = A.transpose() * (b - A * out.x);
    }
    out.residual_norm = (A * out.x - b).norm();
    return out;
}

}  // namespace declutter
