#include "svmlab/svc.hpp"

#include <algorithm>
#include <stdexcept>

namespace svmlab {

std::size_t MulticlassModel::machine_index(std::size_t a, std::size_t b) const {
    const std::size_t n = classes.size();
    if (a >= b || b >= n) {
        throw std::out_of_range("machine_index expects a < b < class count");
    }
    // Pairs (a, a+1..n-1) are preceded by a full rows of decreasing length.
    return a * (2 * n - a - 1) / 2 + (b - a - 1);
}

BinaryModel model_from_solution(const Dataset& dataset, const DualProblem& problem, const DualSolution& solution,
                                const KernelSpec& kernel) {
    const std::size_t m = dataset.size();
    const auto& y = problem.labels();
    const auto& K = problem.gram();

    BinaryModel model;
    model.kernel = kernel;
    model.bias = solution.b;
    model.labels = LabelPair{1, -1};
    for (std::size_t i = 0; i < m; ++i) {
        if (solution.alpha[i] > 0.0) {
            model.support_vectors.push_back(dataset[i].features);
            model.coefficients.push_back(y[i] * solution.alpha[i]);
        }
    }

    auto& diag = model.diagnostics;
    diag.alpha = solution.alpha;
    diag.support_vector_count = model.coefficients.size();
    diag.iterations = solution.iterations;
    diag.objective = solution.objective;
    diag.kkt_residual = solution.kkt_residual;
    diag.slack.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        double f = solution.b;
        for (std::size_t j = 0; j < m; ++j) {
            f += solution.alpha[j] * y[j] * K(i, j);
        }
        diag.slack[i] = std::max(0.0, 1.0 - y[i] * f);
    }
    return model;
}

BinaryModel train_binary(const Dataset& dataset, const TrainParams& params, const SolverConfig& config) {
    const auto& classes = dataset.classes();
    if (classes.size() < 2) {
        throw std::invalid_argument("binary training needs both classes, got only label " +
                                    std::to_string(classes.front()));
    }
    if (classes != std::vector<int>{-1, 1}) {
        throw std::invalid_argument("binary training needs labels exactly {-1, +1}");
    }
    DualProblem problem(gram(params.kernel, dataset), dataset.labels(), params.C);
    auto solution = solve(problem, config);
    if (!solution.converged) {
        const std::string what = "dual solver did not converge after " + std::to_string(solution.iterations) +
                                 " iterations (KKT residual " + std::to_string(solution.kkt_residual) + ")";
        throw TrainingError(what, std::move(solution));
    }
    return model_from_solution(dataset, problem, solution, params.kernel);
}

double decision_value(const BinaryModel& model, const SparseVector& x) {
    double f = 0.0;
    for (std::size_t i = 0; i < model.coefficients.size(); ++i) {
        f += model.coefficients[i] * eval(model.kernel, x, model.support_vectors[i]);
    }
    return f + model.bias;
}

std::vector<double> primal_from_dual(const BinaryModel& model) {
    if (model.kernel.kind() != KernelKind::linear) {
        throw std::invalid_argument("explicit weights exist only for the linear kernel");
    }
    if (model.coefficients.empty()) {
        throw std::invalid_argument("model has no support vectors");
    }
    int dimension = 0;
    for (const auto& sv : model.support_vectors) {
        if (!sv.empty()) {
            dimension = std::max(dimension, sv.back().index);
        }
    }
    std::vector<double> w(static_cast<std::size_t>(dimension), 0.0);
    for (std::size_t i = 0; i < model.coefficients.size(); ++i) {
        for (const auto& f : model.support_vectors[i]) {
            w[static_cast<std::size_t>(f.index - 1)] += model.coefficients[i] * f.value;
        }
    }
    return w;
}

int predict(const BinaryModel& model, const SparseVector& x) {
    return decision_value(model, x) >= 0.0 ? model.labels.positive : model.labels.negative;
}

Dataset pair_subset(const Dataset& dataset, int a, int b) {
    std::vector<Sample> picked;
    for (const auto& s : dataset.samples()) {
        if (s.label == a || s.label == b) {
            picked.push_back({s.features, s.label == a ? 1 : -1});
        }
    }
    return Dataset(std::move(picked));
}

MulticlassModel train_multiclass(const Dataset& dataset, const TrainParams& params, const SolverConfig& config) {
    MulticlassModel model;
    model.classes = dataset.classes();
    const std::size_t n = model.classes.size();
    if (n < 2) {
        throw std::invalid_argument("multiclass training needs at least two classes");
    }
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            const int pos = model.classes[a];
            const int neg = model.classes[b];
            try {
                auto machine = train_binary(pair_subset(dataset, pos, neg), params, config);
                machine.labels = LabelPair{pos, neg};
                model.machines.push_back(std::move(machine));
            } catch (const TrainingError& e) {
                throw TrainingError("pair (" + std::to_string(pos) + ", " + std::to_string(neg) + "): " + e.what(),
                                    e.partial());
            }
        }
    }
    return model;
}

int predict_multiclass(const MulticlassModel& model, const SparseVector& x) {
    std::vector<int> votes(model.classes.size(), 0);
    for (const auto& machine : model.machines) {
        const int winner = predict(machine, x);
        const auto slot = std::lower_bound(model.classes.begin(), model.classes.end(), winner);
        ++votes[static_cast<std::size_t>(slot - model.classes.begin())];
    }
    const auto best = std::max_element(votes.begin(), votes.end()) - votes.begin();
    return model.classes[static_cast<std::size_t>(best)];
}

} // namespace svmlab
