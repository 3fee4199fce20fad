#include "svmlab/dual_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace svmlab {

DualProblem::DualProblem(GramMatrix gram, std::vector<int> labels, double C)
    : gram_(std::move(gram)), labels_(std::move(labels)), C_(C) {
    if (labels_.size() != gram_.size()) {
        throw std::invalid_argument("label count does not match gram dimension");
    }
    if (!(C_ > 0.0) || !std::isfinite(C_)) {
        throw std::invalid_argument("C must be positive and finite");
    }
    bool positive = false;
    bool negative = false;
    for (int y : labels_) {
        if (y != 1 && y != -1) {
            throw std::invalid_argument("dual problem labels must be +1 or -1");
        }
        (y > 0 ? positive : negative) = true;
    }
    if (!positive || !negative) {
        throw std::invalid_argument("dual problem needs both classes");
    }
}

double dual_objective(std::span<const double> alpha, const DualProblem& problem) {
    const std::size_t m = problem.size();
    if (alpha.size() != m) {
        throw std::invalid_argument("multiplier vector has wrong length");
    }
    const auto& y = problem.labels();
    const auto& K = problem.gram();
    double linear = 0.0;
    double quadratic = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        if (alpha[i] == 0.0) {
            continue;
        }
        linear += alpha[i];
        double row = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            row += alpha[j] * y[j] * K(i, j);
        }
        quadratic += alpha[i] * y[i] * row;
    }
    return linear - 0.5 * quadratic;
}

double lagrangian(std::span<const double> w, double b, std::span<const double> alpha, const Dataset& dataset) {
    if (alpha.size() != dataset.size()) {
        throw std::invalid_argument("multiplier vector has wrong length");
    }
    if (w.size() < static_cast<std::size_t>(dataset.dimension())) {
        throw std::invalid_argument("weight vector shorter than data dimension");
    }
    double value = 0.0;
    for (double wk : w) {
        value += 0.5 * wk * wk;
    }
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        double wx = 0.0;
        for (const auto& f : dataset[i].features) {
            wx += w[static_cast<std::size_t>(f.index - 1)] * f.value;
        }
        value -= alpha[i] * (dataset[i].label * (wx + b) - 1.0);
    }
    return value;
}

double bound_threshold(double C) {
    return 1e-8 * std::min(C, 1.0);
}

namespace {

// sum_j alpha_j y_j K_ij
std::vector<double> expansion(std::span<const double> alpha, const DualProblem& problem) {
    const std::size_t m = problem.size();
    const auto& y = problem.labels();
    const auto& K = problem.gram();
    std::vector<double> s(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        if (alpha[j] == 0.0) {
            continue;
        }
        const double coeff = alpha[j] * y[j];
        const auto row = K.row(j);
        for (std::size_t i = 0; i < m; ++i) {
            s[i] += coeff * row[i];
        }
    }
    return s;
}

} // namespace

double compute_bias(std::span<const double> alpha, const DualProblem& problem) {
    const std::size_t m = problem.size();
    if (alpha.empty()) {
        throw std::invalid_argument("cannot recover bias from an empty solution");
    }
    if (alpha.size() != m) {
        throw std::invalid_argument("multiplier vector has wrong length");
    }
    const auto& y = problem.labels();
    const double C = problem.C();
    const double eps = bound_threshold(C);
    const auto s = expansion(alpha, problem);

    double free_sum = 0.0;
    std::size_t free_count = 0;
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
        // b = target makes y_i f(x_i) = 1 exactly.
        const double target = y[i] - s[i];
        if (alpha[i] > eps && alpha[i] < C - eps) {
            free_sum += target;
            ++free_count;
            continue;
        }
        // alpha = 0 demands y_i f >= 1, alpha = C demands y_i f <= 1.
        const bool at_lower = alpha[i] <= eps;
        const bool raises_floor = (y[i] > 0) == at_lower;
        if (raises_floor) {
            lower = std::max(lower, target);
        } else {
            upper = std::min(upper, target);
        }
    }
    if (free_count > 0) {
        return free_sum / static_cast<double>(free_count);
    }
    if (std::isinf(lower)) {
        return upper;
    }
    if (std::isinf(upper)) {
        return lower;
    }
    return 0.5 * (lower + upper);
}

double compute_bias(const DualSolution& solution, const DualProblem& problem) {
    return compute_bias(solution.alpha, problem);
}

std::vector<double> kkt_report(std::span<const double> alpha, double b, const DualProblem& problem) {
    const std::size_t m = problem.size();
    if (alpha.size() != m) {
        throw std::invalid_argument("multiplier vector has wrong length");
    }
    const auto& y = problem.labels();
    const double C = problem.C();
    const double eps = bound_threshold(C);
    const auto s = expansion(alpha, problem);
    std::vector<double> violation(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double margin = y[i] * (s[i] + b);
        if (alpha[i] <= eps) {
            violation[i] = std::max(0.0, 1.0 - margin);
        } else if (alpha[i] >= C - eps) {
            violation[i] = std::max(0.0, margin - 1.0);
        } else {
            violation[i] = std::fabs(margin - 1.0);
        }
    }
    return violation;
}

std::vector<double> kkt_report(const DualSolution& solution, const DualProblem& problem) {
    return kkt_report(solution.alpha, solution.b, problem);
}

DualSolution solve(const DualProblem& problem, const SolverConfig& config) {
    if (!(config.tolerance > 0.0)) {
        throw std::invalid_argument("solver tolerance must be positive");
    }
    const std::size_t m = problem.size();
    const auto& y = problem.labels();
    const auto& K = problem.gram();
    const double C = problem.C();
    const long max_iterations = config.max_iterations > 0
                                    ? config.max_iterations
                                    : static_cast<long>(std::min<std::size_t>(10000 * m, 10'000'000));

    DualSolution out;
    out.alpha.assign(m, 0.0);
    auto& alpha = out.alpha;
    // Gradient of the minimisation form 1/2 a'Qa - e'a, with Q_ij = y_i y_j K_ij.
    std::vector<double> gradient(m, -1.0);
    double objective = 0.0;
    if (config.record_trace) {
        out.objective_trace.push_back(objective);
    }

    const auto in_up = [&](std::size_t t) { return y[t] > 0 ? alpha[t] < C : alpha[t] > 0.0; };
    const auto in_low = [&](std::size_t t) { return y[t] > 0 ? alpha[t] > 0.0 : alpha[t] < C; };

    while (true) {
        // Most violating pair; strict comparisons keep the lowest index on ties.
        std::size_t i = m;
        std::size_t j = m;
        double up_max = -std::numeric_limits<double>::infinity();
        double low_min = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < m; ++t) {
            const double v = -y[t] * gradient[t];
            if (in_up(t) && v > up_max) {
                up_max = v;
                i = t;
            }
            if (in_low(t) && v < low_min) {
                low_min = v;
                j = t;
            }
        }
        if (i == m || j == m || up_max - low_min < config.tolerance) {
            out.converged = true;
            break;
        }
        if (out.iterations >= max_iterations) {
            break;
        }
        ++out.iterations;

        // Move alpha_i by y_i t and alpha_j by -y_j t; sum(alpha y) is unchanged.
        const double raw_curvature = K(i, i) + K(j, j) - 2.0 * K(i, j);
        const double curvature = raw_curvature > 0.0 ? raw_curvature : 1e-12;
        double step = (up_max - low_min) / curvature;
        const double room_i = y[i] > 0 ? C - alpha[i] : alpha[i];
        const double room_j = y[j] > 0 ? alpha[j] : C - alpha[j];
        step = std::min({step, room_i, room_j});

        if (step == room_i) {
            alpha[i] = y[i] > 0 ? C : 0.0;
        } else {
            alpha[i] += y[i] * step;
        }
        if (step == room_j) {
            alpha[j] = y[j] > 0 ? 0.0 : C;
        } else {
            alpha[j] -= y[j] * step;
        }

        const auto row_i = K.row(i);
        const auto row_j = K.row(j);
        for (std::size_t t = 0; t < m; ++t) {
            gradient[t] += y[t] * step * (row_i[t] - row_j[t]);
        }
        if (config.record_trace) {
            objective += step * (up_max - low_min) - 0.5 * raw_curvature * step * step;
            out.objective_trace.push_back(objective);
        }
    }

    out.objective = dual_objective(alpha, problem);
    out.b = compute_bias(alpha, problem);
    const auto violations = kkt_report(alpha, out.b, problem);
    out.kkt_residual = *std::max_element(violations.begin(), violations.end());
    return out;
}

} // namespace svmlab
