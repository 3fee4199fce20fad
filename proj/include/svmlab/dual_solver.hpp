#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "svmlab/dataset.hpp"
#include "svmlab/kernels.hpp"

namespace svmlab {

/// Box bound standing in for C = infinity. Hard-margin training is the
/// soft-margin problem with this bound.
inline constexpr double kHardMarginC = 1e12;

/// Maximise sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij subject to
/// 0 <= alpha_i <= C and sum(alpha_i y_i) = 0.
class DualProblem {
public:
    /// Throws std::invalid_argument if labels are not +-1, sizes disagree,
    /// C is not positive, or only one class is present.
    DualProblem(GramMatrix gram, std::vector<int> labels, double C);

    const GramMatrix& gram() const noexcept { return gram_; }
    const std::vector<int>& labels() const noexcept { return labels_; }
    double C() const noexcept { return C_; }
    std::size_t size() const noexcept { return labels_.size(); }

private:
    GramMatrix gram_;
    std::vector<int> labels_;
    double C_;
};

struct SolverConfig {
    /// Stop once the maximal KKT violation between any admissible pair of
    /// multipliers drops below this.
    double tolerance = 1e-3;
    /// 0 selects min(10000 * m, 10^7).
    long max_iterations = 0;
    /// Record the dual objective after every pairwise update.
    bool record_trace = false;
};

struct DualSolution {
    std::vector<double> alpha;
    double b = 0.0;
    double objective = 0.0;
    /// Largest per-sample KKT violation (see kkt_report) at (alpha, b).
    double kkt_residual = 0.0;
    long iterations = 0;
    bool converged = false;
    std::vector<double> objective_trace;
};

double dual_objective(std::span<const double> alpha, const DualProblem& problem);

/// Primal Lagrangian 1/2 |w|^2 - sum alpha_i (y_i (<w, x_i> + b) - 1) for an
/// explicit (dense, 0-based) weight vector.
double lagrangian(std::span<const double> w, double b, std::span<const double> alpha, const Dataset& dataset);

/// Sequential two-variable ascent with maximal-violating-pair selection.
/// Never throws on the iteration cap; the result is flagged instead.
DualSolution solve(const DualProblem& problem, const SolverConfig& config = {});

/// Exhaustive oracle for tiny problems (m <= 6). Every face of the box is
/// visited (each multiplier pinned at 0, pinned at C, or free) and the
/// stationary point of the dual restricted to that face and the equality
/// constraint is solved for directly; the best feasible one wins. For hard
/// margin problems the box is unbounded in principle, so the sentinel C is
/// used as the upper face.
DualSolution solve_bruteforce(const DualProblem& problem);

/// Per-sample violation of the three-case KKT conditions at (alpha, b):
/// alpha = 0 needs y f >= 1, 0 < alpha < C needs y f = 1, alpha = C needs
/// y f <= 1. Bounds are detected with the same threshold as compute_bias.
std::vector<double> kkt_report(std::span<const double> alpha, double b, const DualProblem& problem);
std::vector<double> kkt_report(const DualSolution& solution, const DualProblem& problem);

/// Threshold below which a multiplier counts as sitting on a bound.
double bound_threshold(double C);

/// Bias from the KKT conditions: the average of y_i - sum_j alpha_j y_j K_ij
/// over free multipliers, or the midpoint of the interval the bound
/// multipliers allow when none is free.
double compute_bias(std::span<const double> alpha, const DualProblem& problem);
double compute_bias(const DualSolution& solution, const DualProblem& problem);

} // namespace svmlab
