#include "svmlab/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include "svmlab/detail/format.hpp"

namespace svmlab {

namespace {

double checked_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw std::invalid_argument(std::string(name) + " must be positive and finite");
    }
    return value;
}

} // namespace

KernelSpec KernelSpec::gaussian(double sigma) {
    return KernelSpec(KernelKind::gaussian, checked_positive(sigma, "sigma"));
}

KernelSpec KernelSpec::rbf(double gamma) {
    return KernelSpec(KernelKind::rbf, checked_positive(gamma, "gamma"));
}

KernelSpec KernelSpec::parse(std::string_view text) {
    if (text == "linear") {
        return linear();
    }
    const auto colon = text.find(':');
    if (colon != std::string_view::npos) {
        const auto name = text.substr(0, colon);
        const auto value = detail::parse_double(text.substr(colon + 1));
        if (value && name == "gaussian") {
            return gaussian(*value);
        }
        if (value && name == "rbf") {
            return rbf(*value);
        }
    }
    throw std::invalid_argument("bad kernel spec '" + std::string(text) +
                                "' (expected linear, gaussian:<sigma> or rbf:<gamma>)");
}

std::string KernelSpec::to_string() const {
    switch (kind_) {
    case KernelKind::linear:
        return "linear";
    case KernelKind::gaussian:
        return "gaussian:" + detail::shortest(parameter_);
    case KernelKind::rbf:
        return "rbf:" + detail::shortest(parameter_);
    }
    return {};
}

double dot(const SparseVector& a, const SparseVector& b) {
    double sum = 0.0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (i->index == j->index) {
            sum += i->value * j->value;
            ++i;
            ++j;
        } else if (i->index < j->index) {
            ++i;
        } else {
            ++j;
        }
    }
    return sum;
}

double squared_distance(const SparseVector& a, const SparseVector& b) {
    double sum = 0.0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() || j != b.end()) {
        double d = 0.0;
        if (j == b.end() || (i != a.end() && i->index < j->index)) {
            d = i->value;
            ++i;
        } else if (i == a.end() || j->index < i->index) {
            d = j->value;
            ++j;
        } else {
            d = i->value - j->value;
            ++i;
            ++j;
        }
        sum += d * d;
    }
    return sum;
}

double eval(const KernelSpec& kernel, const SparseVector& a, const SparseVector& b) {
    switch (kernel.kind()) {
    case KernelKind::linear:
        return dot(a, b);
    case KernelKind::gaussian: {
        const double sigma = kernel.parameter();
        return std::exp(-squared_distance(a, b) / (2.0 * sigma * sigma));
    }
    case KernelKind::rbf:
        return std::exp(-kernel.parameter() * squared_distance(a, b));
    }
    return 0.0;
}

GramMatrix::GramMatrix(KernelSpec kernel, std::size_t size, std::vector<double> entries)
    : kernel_(kernel), size_(size), entries_(std::move(entries)) {
    if (entries_.size() != size_ * size_) {
        throw std::invalid_argument("gram entries do not form a square matrix");
    }
}

GramMatrix gram(const KernelSpec& kernel, std::span<const SparseVector> points) {
    const std::size_t m = points.size();
    std::vector<double> entries(m * m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i; j < m; ++j) {
            const double k = eval(kernel, points[i], points[j]);
            entries[i * m + j] = k;
            entries[j * m + i] = k;
        }
    }
    return GramMatrix(kernel, m, std::move(entries));
}

GramMatrix gram(const KernelSpec& kernel, const Dataset& dataset) {
    std::vector<SparseVector> points;
    points.reserve(dataset.size());
    for (const auto& s : dataset.samples()) {
        points.push_back(s.features);
    }
    return gram(kernel, points);
}

} // namespace svmlab
