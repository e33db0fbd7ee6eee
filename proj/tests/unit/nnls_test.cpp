#include <doctest.h>

#include "declutter/nnls.hpp"
#include "declutter/random.hpp"

using namespace declutter;

namespace {

// Tries every support set: unconstrained least squares on the chosen
// columns, kept when non-negative. The best feasible candidate is optimal.
double brute_force_residual(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
    const int n = static_cast<int>(A.cols());
    double best = b.norm();
    for (int mask = 1; mask < (1 << n); ++mask) {
        std::vector<int> cols;
        for (int j = 0; j < n; ++j)
            if (mask >> j & 1) cols.push_back(j);
        Eigen::MatrixXd As(A.rows(), static_cast<Eigen::Index>(cols.size()));
        for (std::size_t k = 0; k < cols.size(); ++k) As.col(static_cast<Eigen::Index>(k)) = A.col(cols[k]);
        const Eigen::VectorXd xs = As.colPivHouseholderQr().solve(b);
        if ((xs.array() < -1e-12).any()) continue;
        best = std::min(best, (As * xs - b).norm());
    }
    return best;
}

}  // namespace

TEST_CASE("nnls matches an unconstrained solution when it is non-negative") {
    Eigen::MatrixXd A(4, 2);
    A << 1, 0, 0, 1, 1, 1, 2, 1;
    const Eigen::VectorXd x_true = Eigen::Vector2d(3, 0.5);
    const Eigen::VectorXd b = A * x_true;
    const auto r = nnls(A, b);
    CHECK(r.x(0) == doctest::Approx(3));
    CHECK(r.x(1) == doctest::Approx(0.5));
    CHECK(r.residual_norm < 1e-10);
}

TEST_CASE("nnls clamps a negative direction to zero") {
    Eigen::MatrixXd A(3, 2);
    A << 1, 0, 0, 1, 0, 0;
    const Eigen::VectorXd b = Eigen::Vector3d(2, -1, 0);
    const auto r = nnls(A, b);
    CHECK(r.x(0) == doctest::Approx(2));
    CHECK(r.x(1) == doctest::Approx(0));
    CHECK(r.residual_norm == doctest::Approx(1));
}

TEST_CASE("nnls residual equals brute-force active-set search") {
    Rng rng(77);
    for (int t = 0; t < 300; ++t) {
        const int m = 3 + static_cast<int>(rng.index(10));
        const int n = 1 + static_cast<int>(rng.index(5));
        Eigen::MatrixXd A(m, n);
        Eigen::VectorXd b(m);
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < n; ++j) A(i, j) = rng.uniform(-2, 2);
            b(i) = rng.uniform(-5, 5);
        }
        const auto r = nnls(A, b);
        INFO("trial " << t);
        CHECK((r.x.array() >= 0).all());
        CHECK(r.residual_norm == doctest::Approx((A * r.x - b).norm()).epsilon(1e-9));
        CHECK(r.residual_norm == doctest::Approx(brute_force_residual(A, b)).epsilon(1e-7));
    }
}
