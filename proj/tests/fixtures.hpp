#pragma once

#include <cmath>
#include <vector>

#include "svmlab/dataset.hpp"
#include "svmlab/detail/random.hpp"

namespace svmlab::fixtures {

inline Sample sample(int label, std::vector<double> dense) {
    return Sample{from_dense(dense), label};
}

/// x = (+-1, 0), y = +-1. Hard-margin optimum: alpha = (1/2, 1/2), w = (1, 0), b = 0.
inline Dataset two_point() {
    return Dataset({sample(1, {1.0, 0.0}), sample(-1, {-1.0, 0.0})});
}

/// Corners of the square labelled by the product of coordinate signs.
inline Dataset xor_square() {
    return Dataset({sample(1, {1.0, 1.0}), sample(1, {-1.0, -1.0}), sample(-1, {1.0, -1.0}),
                    sample(-1, {-1.0, 1.0})});
}

/// per_class points on each side of the slab -1 < x1 < 1.
inline Dataset separable(std::size_t per_class, std::uint64_t seed) {
    detail::Engine engine(seed);
    std::vector<Sample> samples;
    for (std::size_t i = 0; i < per_class; ++i) {
        samples.push_back(sample(1, {detail::uniform_real(engine, 1.0, 3.0), detail::uniform_real(engine, -2.0, 2.0)}));
        samples.push_back(
            sample(-1, {detail::uniform_real(engine, -3.0, -1.0), detail::uniform_real(engine, -2.0, 2.0)}));
    }
    return Dataset(std::move(samples));
}

/// Two overlapping clouds; no hyperplane separates them.
inline Dataset overlapping(std::size_t per_class, std::uint64_t seed) {
    detail::Engine engine(seed);
    std::vector<Sample> samples;
    for (std::size_t i = 0; i < per_class; ++i) {
        samples.push_back(
            sample(1, {detail::uniform_real(engine, -0.5, 2.0), detail::uniform_real(engine, -1.0, 1.0)}));
        samples.push_back(
            sample(-1, {detail::uniform_real(engine, -2.0, 0.5), detail::uniform_real(engine, -1.0, 1.0)}));
    }
    return Dataset(std::move(samples));
}

inline const std::vector<std::vector<double>>& blob_centers() {
    static const std::vector<std::vector<double>> centers{{0.0, 0.0}, {5.0, 0.0}, {2.5, 4.33}};
    return centers;
}

/// Classes 1, 2, 3 drawn uniformly from disks of radius 1.5 around
/// blob_centers(); the disks are at least 2 apart, so the classes are
/// linearly separable pairwise.
inline Dataset blobs(std::size_t per_class, std::uint64_t seed) {
    detail::Engine engine(seed);
    std::vector<Sample> samples;
    for (std::size_t i = 0; i < per_class; ++i) {
        for (int c = 0; c < 3; ++c) {
            const double radius = 1.5 * std::sqrt(detail::uniform_real(engine, 0.0, 1.0));
            const double angle = detail::uniform_real(engine, 0.0, 2.0 * M_PI);
            const auto& center = blob_centers()[static_cast<std::size_t>(c)];
            samples.push_back(sample(c + 1, {center[0] + radius * std::cos(angle),
                                             center[1] + radius * std::sin(angle)}));
        }
    }
    return Dataset(std::move(samples));
}

inline SparseVector random_probe(detail::Engine& engine, int dimension, double scale) {
    std::vector<double> dense(static_cast<std::size_t>(dimension));
    for (auto& v : dense) {
        v = detail::uniform_real(engine, -scale, scale);
    }
    return from_dense(dense);
}

} // namespace svmlab::fixtures
