#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace svmlab {

/// One stored coordinate of a sparse vector. Indices are 1-based.
struct Feature {
    int index = 0;
    double value = 0.0;

    friend bool operator==(const Feature&, const Feature&) = default;
};

/// Sparse feature vector with strictly increasing indices; absent
/// coordinates are zero.
using SparseVector = std::vector<Feature>;

struct Sample {
    SparseVector features;
    int label = 0;

    friend bool operator==(const Sample&, const Sample&) = default;
};

/// Throws std::invalid_argument unless indices are positive, strictly
/// increasing and every value is finite.
void validate_features(const SparseVector& x);

/// Builds a sparse vector from dense coordinates, dropping exact zeros.
SparseVector from_dense(std::span<const double> dense);

/// Immutable, nonempty collection of labelled observations.
class Dataset {
public:
    /// Validates every sample; throws std::invalid_argument on an empty list
    /// or a malformed feature vector.
    explicit Dataset(std::vector<Sample> samples);

    std::size_t size() const noexcept { return samples_.size(); }
    const Sample& operator[](std::size_t i) const { return samples_[i]; }
    const std::vector<Sample>& samples() const noexcept { return samples_; }

    /// Largest feature index seen (at least 1).
    int dimension() const noexcept { return dimension_; }

    /// Distinct labels in ascending order.
    const std::vector<int>& classes() const noexcept { return classes_; }

    std::vector<int> labels() const;

    /// Samples at the given positions, in that order.
    Dataset subset(std::span<const std::size_t> indices) const;

    friend bool operator==(const Dataset& a, const Dataset& b) { return a.samples_ == b.samples_; }

private:
    std::vector<Sample> samples_;
    int dimension_ = 1;
    std::vector<int> classes_;
};

/// Parses `<label> <idx>:<val> ...` records, one per line. Blank lines and
/// anything after `#` are ignored. Throws ParseError with the line number.
Dataset parse_sparse(std::string_view text);

/// Reads a file in the sparse text format.
Dataset load_sparse(const std::string& path);

/// Inverse of parse_sparse. Values use the shortest decimal form that reads
/// back to the same double.
std::string to_sparse(const Dataset& dataset);

/// Assignment of every sample to one of k folds.
struct FoldPlan {
    int k = 0;
    std::vector<int> assignment;

    /// Positions of samples held out in fold `fold`.
    std::vector<std::size_t> test_indices(int fold) const;
    /// Positions of samples used for training when `fold` is held out.
    std::vector<std::size_t> train_indices(int fold) const;

    friend bool operator==(const FoldPlan&, const FoldPlan&) = default;
};

/// Stratified k-fold split. Within each class the samples are shuffled with
/// a generator seeded by `seed`, then all classes are dealt round-robin onto
/// the folds with a single running cursor, so fold sizes differ by at most
/// one and every class is spread as evenly as its count allows.
FoldPlan split_kfold(const Dataset& dataset, int k, std::uint64_t seed);

} // namespace svmlab
