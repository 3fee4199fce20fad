#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "svmlab/dataset.hpp"
#include "svmlab/kernels.hpp"
#include "svmlab/svc.hpp"

namespace svmlab {

struct ParamGrid {
    std::vector<double> C_values;
    /// Required for rbf grids, ignored for linear ones.
    std::vector<double> gamma_values;

    /// C in {2^-5, 2^-3, ..., 2^15}, gamma in {2^-15, 2^-13, ..., 2^3}.
    static ParamGrid defaults();
};

/// Mean held-out accuracy over the folds of `folds`, training one-against-one
/// machines on each remainder. Throws FoldError when a remainder misses a
/// class or fails to train.
double cv_accuracy(const Dataset& dataset, const TrainParams& params, const FoldPlan& folds,
                   const SolverConfig& config = {});

/// Accuracy recorded for a cell whose evaluation failed.
inline constexpr double kFailedCell = -1.0;

struct GridCell {
    double C = 0.0;
    std::optional<double> gamma;
    double accuracy = kFailedCell;
    std::string error;
};

struct GridResult {
    /// Row-major over C (outer) and gamma (inner), both ascending.
    std::vector<GridCell> cells;
    std::size_t winner = 0;
    FoldPlan folds;
};

/// Evaluates every cell on one shared fold plan. The winner has the highest
/// accuracy; ties go to the smaller C, then the smaller gamma. Failed cells
/// keep kFailedCell and are skipped; if all fail an Error is thrown.
/// `kind` must be linear or rbf. Cells may be evaluated concurrently.
GridResult grid_search(const Dataset& dataset, const ParamGrid& grid, KernelKind kind, int k, std::uint64_t seed,
                       const SolverConfig& config = {});

/// `C,gamma,accuracy` header; gamma is blank for linear grids.
std::string grid_csv(const GridResult& result);

} // namespace svmlab
