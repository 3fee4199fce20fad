#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "svmlab/dual_solver.hpp"

namespace svmlab {

namespace {

enum class Face { lower, upper, free };

// Stationary point of the dual on one face of the box, intersected with the
// equality constraint. Returns false when that point is not unique or leaves
// the box.
bool solve_face(const DualProblem& problem, const std::vector<Face>& faces, std::vector<double>& alpha) {
    const std::size_t m = problem.size();
    const auto& y = problem.labels();
    const auto& K = problem.gram();
    const double C = problem.C();

    std::vector<std::size_t> free;
    alpha.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        if (faces[i] == Face::upper) {
            alpha[i] = C;
        } else if (faces[i] == Face::free) {
            free.push_back(i);
        }
    }

    double pinned_balance = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        pinned_balance += alpha[i] * y[i];
    }
    if (free.empty()) {
        return std::fabs(pinned_balance) <= 1e-12 * std::max(1.0, C);
    }

    // [Q_FF  y_F] [alpha_F]   [1 - Q_FB alpha_B]
    // [y_F'   0 ] [  nu   ] = [ -y_B' alpha_B  ]
    const auto n = static_cast<Eigen::Index>(free.size());
    Eigen::MatrixXd system = Eigen::MatrixXd::Zero(n + 1, n + 1);
    Eigen::VectorXd rhs(n + 1);
    for (Eigen::Index a = 0; a < n; ++a) {
        const std::size_t i = free[static_cast<std::size_t>(a)];
        for (Eigen::Index c = 0; c < n; ++c) {
            const std::size_t j = free[static_cast<std::size_t>(c)];
            system(a, c) = y[i] * y[j] * K(i, j);
        }
        system(a, n) = y[i];
        system(n, a) = y[i];
        double pinned = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            if (faces[j] == Face::upper) {
                pinned += y[i] * y[j] * K(i, j) * C;
            }
        }
        rhs(a) = 1.0 - pinned;
    }
    rhs(n) = -pinned_balance;

    Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
    lu.setThreshold(1e-10);
    if (!lu.isInvertible()) {
        return false;
    }
    const Eigen::VectorXd x = lu.solve(rhs);
    const double slack = 1e-9 * std::max(1.0, std::min(C, 1e3));
    for (Eigen::Index a = 0; a < n; ++a) {
        double v = x(a);
        if (!std::isfinite(v) || v < -slack || v > C + slack) {
            return false;
        }
        alpha[free[static_cast<std::size_t>(a)]] = std::clamp(v, 0.0, C);
    }
    return true;
}

} // namespace

DualSolution solve_bruteforce(const DualProblem& problem) {
    const std::size_t m = problem.size();
    if (m > 6) {
        throw std::invalid_argument("brute-force dual oracle is limited to m <= 6");
    }

    DualSolution best;
    best.objective = -std::numeric_limits<double>::infinity();
    std::vector<Face> faces(m, Face::lower);
    std::vector<double> alpha;
    std::size_t total = 1;
    for (std::size_t i = 0; i < m; ++i) {
        total *= 3;
    }
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t rest = code;
        for (std::size_t i = 0; i < m; ++i) {
            faces[i] = static_cast<Face>(rest % 3);
            rest /= 3;
        }
        ++best.iterations;
        if (!solve_face(problem, faces, alpha)) {
            continue;
        }
        const double value = dual_objective(alpha, problem);
        if (value > best.objective) {
            best.objective = value;
            best.alpha = alpha;
        }
    }
    // The all-lower face (alpha = 0) is always feasible.
    best.converged = true;
    best.b = compute_bias(best.alpha, problem);
    const auto violations = kkt_report(best.alpha, best.b, problem);
    best.kkt_residual = *std::max_element(violations.begin(), violations.end());
    return best;
}

} // namespace svmlab
