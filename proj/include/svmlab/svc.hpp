#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "svmlab/dataset.hpp"
#include "svmlab/dual_solver.hpp"
#include "svmlab/error.hpp"
#include "svmlab/kernels.hpp"
#include "svmlab/sigmoid_params.hpp"

namespace svmlab {

struct TrainParams {
    KernelSpec kernel = KernelSpec::linear();
    /// kHardMarginC selects the hard margin.
    double C = kHardMarginC;
};

/// Class ids a binary machine outputs for f >= 0 and f < 0.
struct LabelPair {
    int positive = 1;
    int negative = -1;

    friend bool operator==(const LabelPair&, const LabelPair&) = default;
};

/// Training-time by-products, indexed like the training set. Not persisted.
struct TrainingDiagnostics {
    std::vector<double> alpha;
    /// xi_i = max(0, 1 - y_i f(x_i)).
    std::vector<double> slack;
    std::size_t support_vector_count = 0;
    long iterations = 0;
    double objective = 0.0;
    double kkt_residual = 0.0;
};

/// f(x) = sum_i coefficients_i k(x, sv_i) + bias, with coefficients y_i alpha_i.
struct BinaryModel {
    KernelSpec kernel = KernelSpec::linear();
    std::vector<SparseVector> support_vectors;
    std::vector<double> coefficients;
    double bias = 0.0;
    LabelPair labels;
    std::optional<SigmoidParams> sigmoid;
    TrainingDiagnostics diagnostics;
};

/// One-against-one ensemble; machines are ordered (0,1), (0,2), ..., (n-2,n-1)
/// over `classes`, and each machine's positive class is the smaller id.
struct MulticlassModel {
    std::vector<int> classes;
    std::vector<BinaryModel> machines;

    std::size_t machine_index(std::size_t a, std::size_t b) const;
};

/// Raised when the dual solver stops at its iteration cap.
class TrainingError : public ConvergenceError {
public:
    TrainingError(const std::string& what, DualSolution partial)
        : ConvergenceError(what), partial_(std::move(partial)) {}

    const DualSolution& partial() const noexcept { return partial_; }

private:
    DualSolution partial_;
};

/// Labels must be exactly {-1, +1}.
BinaryModel train_binary(const Dataset& dataset, const TrainParams& params, const SolverConfig& config = {});

/// Assembles a model from a solved dual. Keeps samples with alpha_i > 0.
BinaryModel model_from_solution(const Dataset& dataset, const DualProblem& problem, const DualSolution& solution,
                                const KernelSpec& kernel);

double decision_value(const BinaryModel& model, const SparseVector& x);

/// Explicit weight vector (dense, entry k is feature k + 1) for linear
/// kernels. It ends at the largest feature index used by a support vector;
/// later features have weight 0. Throws std::invalid_argument for other
/// kernels or an empty model.
std::vector<double> primal_from_dual(const BinaryModel& model);

/// Positive class when f(x) >= 0.
int predict(const BinaryModel& model, const SparseVector& x);

/// Trains one machine per class pair. Throws std::invalid_argument for fewer
/// than two classes; a failing pair is rethrown with the pair named.
MulticlassModel train_multiclass(const Dataset& dataset, const TrainParams& params, const SolverConfig& config = {});

/// Majority vote; ties go to the smallest class id.
int predict_multiclass(const MulticlassModel& model, const SparseVector& x);

/// Samples of classes a and b relabelled to +1 (a) and -1 (b).
Dataset pair_subset(const Dataset& dataset, int a, int b);

/// Line-oriented text with hexadecimal reals and a trailing FNV-1a checksum.
std::string save_model(const MulticlassModel& model);
std::string save_model(const BinaryModel& model);

/// Throws ModelFormatError on version mismatch, malformed fields or a
/// checksum failure.
MulticlassModel load_model(std::string_view text);
/// As load_model, but the file must hold exactly one machine.
BinaryModel load_binary_model(std::string_view text);

} // namespace svmlab
