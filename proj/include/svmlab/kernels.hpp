#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "svmlab/dataset.hpp"

namespace svmlab {

enum class KernelKind { linear, gaussian, rbf };

/// Declarative kernel choice. The Gaussian form is parameterised by a width
/// sigma, the RBF form by gamma; both use a negative exponent.
class KernelSpec {
public:
    static KernelSpec linear() { return KernelSpec(KernelKind::linear, 0.0); }
    /// exp(-|x - x'|^2 / (2 sigma^2)); sigma must be positive and finite.
    static KernelSpec gaussian(double sigma);
    /// exp(-gamma |x - x'|^2); gamma must be positive and finite.
    static KernelSpec rbf(double gamma);

    /// Reads `linear`, `gaussian:<sigma>` or `rbf:<gamma>`.
    static KernelSpec parse(std::string_view text);

    KernelKind kind() const noexcept { return kind_; }
    /// sigma for gaussian, gamma for rbf, 0 for linear.
    double parameter() const noexcept { return parameter_; }

    /// Inverse of parse; the parameter is written in shortest round-trip form
    /// so the encoding is lossless.
    std::string to_string() const;

    friend bool operator==(const KernelSpec&, const KernelSpec&) = default;

private:
    KernelSpec(KernelKind kind, double parameter) : kind_(kind), parameter_(parameter) {}

    KernelKind kind_;
    double parameter_;
};

double dot(const SparseVector& a, const SparseVector& b);

/// |a - b|^2 by a merged traversal of both index lists.
double squared_distance(const SparseVector& a, const SparseVector& b);

double eval(const KernelSpec& kernel, const SparseVector& a, const SparseVector& b);

/// Dense symmetric m x m matrix of kernel values over a training set.
class GramMatrix {
public:
    GramMatrix(KernelSpec kernel, std::size_t size, std::vector<double> entries);

    std::size_t size() const noexcept { return size_; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return entries_[i * size_ + j]; }
    std::span<const double> row(std::size_t i) const noexcept { return {entries_.data() + i * size_, size_}; }
    const KernelSpec& kernel() const noexcept { return kernel_; }

private:
    KernelSpec kernel_;
    std::size_t size_;
    std::vector<double> entries_;
};

/// Each unordered pair is evaluated once and mirrored.
GramMatrix gram(const KernelSpec& kernel, std::span<const SparseVector> points);
GramMatrix gram(const KernelSpec& kernel, const Dataset& dataset);

} // namespace svmlab
