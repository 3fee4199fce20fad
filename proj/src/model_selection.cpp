#include "svmlab/model_selection.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "svmlab/calibration.hpp"
#include "svmlab/detail/format.hpp"
#include "svmlab/risk.hpp"

namespace svmlab {

ParamGrid ParamGrid::defaults() {
    ParamGrid grid;
    for (int e = -5; e <= 15; e += 2) {
        grid.C_values.push_back(std::ldexp(1.0, e));
    }
    for (int e = -15; e <= 3; e += 2) {
        grid.gamma_values.push_back(std::ldexp(1.0, e));
    }
    return grid;
}

double cv_accuracy(const Dataset& dataset, const TrainParams& params, const FoldPlan& folds,
                   const SolverConfig& config) {
    if (folds.assignment.size() != dataset.size()) {
        throw std::invalid_argument("fold plan does not match dataset size");
    }
    double total = 0.0;
    for (int fold = 0; fold < folds.k; ++fold) {
        const auto train = dataset.subset(folds.train_indices(fold));
        if (train.classes() != dataset.classes()) {
            throw FoldError(fold, "training remainder is missing a class");
        }
        MulticlassModel model;
        try {
            model = train_multiclass(train, params, config);
        } catch (const std::exception& e) {
            throw FoldError(fold, e.what());
        }
        std::vector<int> predicted;
        std::vector<int> actual;
        for (auto i : folds.test_indices(fold)) {
            predicted.push_back(predict_multiclass(model, dataset[i].features));
            actual.push_back(dataset[i].label);
        }
        total += 1.0 - misclassification_rate(predicted, actual);
    }
    return total / static_cast<double>(folds.k);
}

namespace {

void check_ladder(const std::vector<double>& values, const char* name) {
    if (values.empty()) {
        throw std::invalid_argument(std::string(name) + " grid is empty");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
            throw std::invalid_argument(std::string(name) + " values must be positive and finite");
        }
        if (i > 0 && !(values[i] > values[i - 1])) {
            throw std::invalid_argument(std::string(name) + " values must be strictly increasing");
        }
    }
}

} // namespace

GridResult grid_search(const Dataset& dataset, const ParamGrid& grid, KernelKind kind, int k, std::uint64_t seed,
                       const SolverConfig& config) {
    if (kind == KernelKind::gaussian) {
        throw std::invalid_argument("grid search supports linear and rbf kernels");
    }
    check_ladder(grid.C_values, "C");
    if (kind == KernelKind::rbf) {
        check_ladder(grid.gamma_values, "gamma");
    }

    GridResult result;
    result.folds = split_kfold(dataset, k, seed);
    for (double C : grid.C_values) {
        if (kind == KernelKind::linear) {
            result.cells.push_back({C, std::nullopt, kFailedCell, {}});
            continue;
        }
        for (double gamma : grid.gamma_values) {
            result.cells.push_back({C, gamma, kFailedCell, {}});
        }
    }

    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < result.cells.size(); i = next++) {
            auto& cell = result.cells[i];
            const TrainParams params{cell.gamma ? KernelSpec::rbf(*cell.gamma) : KernelSpec::linear(), cell.C};
            try {
                cell.accuracy = cv_accuracy(dataset, params, result.folds, config);
            } catch (const std::exception& e) {
                cell.accuracy = kFailedCell;
                cell.error = e.what();
            }
        }
    };
    const auto threads = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, result.cells.size());
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 1; t < threads; ++t) {
            pool.emplace_back(worker);
        }
        worker();
    }

    bool found = false;
    for (std::size_t i = 0; i < result.cells.size(); ++i) {
        const auto& cell = result.cells[i];
        if (cell.accuracy == kFailedCell) {
            continue;
        }
        // Cells are visited in ascending (C, gamma) order, so a strict
        // comparison implements the tie-break.
        if (!found || cell.accuracy > result.cells[result.winner].accuracy) {
            result.winner = i;
            found = true;
        }
    }
    if (!found) {
        throw Error("grid search: every cell failed (first error: " + result.cells.front().error + ")");
    }
    return result;
}

std::string grid_csv(const GridResult& result) {
    std::string out = "C,gamma,accuracy\n";
    for (const auto& cell : result.cells) {
        out += detail::shortest(cell.C) + ',' + (cell.gamma ? detail::shortest(*cell.gamma) : std::string()) + ',' +
               detail::shortest(cell.accuracy) + '\n';
    }
    return out;
}

} // namespace svmlab
