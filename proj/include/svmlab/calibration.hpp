#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "svmlab/dataset.hpp"
#include "svmlab/error.hpp"
#include "svmlab/sigmoid_params.hpp"
#include "svmlab/svc.hpp"

namespace svmlab {

/// Folds whose remainder can't be trained are reported with the fold id.
class FoldError : public Error {
public:
    FoldError(int fold, const std::string& what)
        : Error("fold " + std::to_string(fold) + ": " + what), fold_(fold) {}

    int fold() const noexcept { return fold_; }

private:
    int fold_;
};

/// Decision value of every sample from a model trained without its fold.
std::vector<double> cv_decision_values(const Dataset& dataset, const TrainParams& params, const FoldPlan& folds,
                                       const SolverConfig& config = {});

/// Platt's sigmoid fit: minimises the negative log likelihood of smoothed
/// targets (N+ + 1)/(N+ + 2) for positives and 1/(N- + 2) for negatives by
/// Newton steps with backtracking. Labels are +-1.
SigmoidParams fit_sigmoid(std::span<const double> values, std::span<const int> labels);

/// Negative log likelihood fit_sigmoid minimises.
double sigmoid_nll(const SigmoidParams& params, std::span<const double> values, std::span<const int> labels);

/// 1 / (1 + exp(A f + B)), evaluated without overflow.
double pairwise_prob(const SigmoidParams& params, double f);

/// r(i, j) estimates P(y = i | y in {i, j}, x); r(j, i) = 1 - r(i, j).
class PairwiseProbMatrix {
public:
    explicit PairwiseProbMatrix(std::size_t classes);

    std::size_t size() const noexcept { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return r_[i * n_ + j]; }

    /// Sets r(i, j) and r(j, i) = 1 - r. Requires 0 < r < 1 and i != j.
    void set(std::size_t i, std::size_t j, double r);

private:
    std::size_t n_;
    std::vector<double> r_;
};

/// Class posteriors minimising sum_{i != j} (r_ji p_i - r_ij p_j)^2 over the
/// probability simplex.
std::vector<double> couple(const PairwiseProbMatrix& r);

/// Pairwise probabilities are clipped to [kMinPairwiseProb, 1 - kMinPairwiseProb]
/// before coupling so saturated sigmoids stay inside the open interval.
inline constexpr double kMinPairwiseProb = 1e-7;

/// Posterior over model.classes. Every machine must carry sigmoid parameters.
std::vector<double> predict_proba(const MulticlassModel& model, const SparseVector& x);

/// Fits a sigmoid for every machine from k-fold cross-validated decision
/// values on that machine's pair of classes. k is reduced to the pair's
/// sample count when smaller.
void calibrate(MulticlassModel& model, const Dataset& dataset, const TrainParams& params, int k,
               std::uint64_t seed, const SolverConfig& config = {});

} // namespace svmlab
