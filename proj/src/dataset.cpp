#include "svmlab/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "svmlab/detail/format.hpp"
#include "svmlab/detail/random.hpp"
#include "svmlab/error.hpp"

namespace svmlab {

void validate_features(const SparseVector& x) {
    int previous = 0;
    for (const auto& f : x) {
        if (f.index <= previous) {
            throw std::invalid_argument("feature indices must be positive and strictly increasing");
        }
        if (!std::isfinite(f.value)) {
            throw std::invalid_argument("feature values must be finite");
        }
        previous = f.index;
    }
}

SparseVector from_dense(std::span<const double> dense) {
    SparseVector x;
    for (std::size_t i = 0; i < dense.size(); ++i) {
        if (dense[i] != 0.0) {
            x.push_back({static_cast<int>(i + 1), dense[i]});
        }
    }
    validate_features(x);
    return x;
}

Dataset::Dataset(std::vector<Sample> samples) : samples_(std::move(samples)) {
    if (samples_.empty()) {
        throw std::invalid_argument("empty dataset");
    }
    for (const auto& s : samples_) {
        validate_features(s.features);
        if (!s.features.empty()) {
            dimension_ = std::max(dimension_, s.features.back().index);
        }
        classes_.push_back(s.label);
    }
    std::sort(classes_.begin(), classes_.end());
    classes_.erase(std::unique(classes_.begin(), classes_.end()), classes_.end());
}

std::vector<int> Dataset::labels() const {
    std::vector<int> out;
    out.reserve(samples_.size());
    for (const auto& s : samples_) {
        out.push_back(s.label);
    }
    return out;
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
    std::vector<Sample> picked;
    picked.reserve(indices.size());
    for (auto i : indices) {
        picked.push_back(samples_.at(i));
    }
    return Dataset(std::move(picked));
}

namespace {

std::vector<std::string_view> split_tokens(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t pos = 0;
    while (pos < line.size()) {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) {
            ++pos;
        }
        const std::size_t start = pos;
        while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t' && line[pos] != '\r') {
            ++pos;
        }
        if (pos > start) {
            tokens.push_back(line.substr(start, pos - start));
        }
    }
    return tokens;
}

Sample parse_record(std::string_view line, std::size_t line_no) {
    const auto tokens = split_tokens(line);
    Sample sample;
    const auto label = detail::parse_integer(tokens.front());
    if (!label || *label < std::numeric_limits<int>::min() || *label > std::numeric_limits<int>::max()) {
        throw ParseError(line_no, "non-numeric label '" + std::string(tokens.front()) + "'");
    }
    sample.label = static_cast<int>(*label);

    int previous = 0;
    for (std::size_t t = 1; t < tokens.size(); ++t) {
        const auto token = tokens[t];
        const auto colon = token.find(':');
        if (colon == std::string_view::npos) {
            throw ParseError(line_no, "expected <index>:<value>, got '" + std::string(token) + "'");
        }
        const auto index = detail::parse_integer(token.substr(0, colon));
        if (!index || *index > std::numeric_limits<int>::max()) {
            throw ParseError(line_no, "bad feature index in '" + std::string(token) + "'");
        }
        if (*index <= 0) {
            throw ParseError(line_no, "feature index must be positive, got " + std::to_string(*index));
        }
        if (*index <= previous) {
            throw ParseError(line_no, "feature indices not increasing at index " + std::to_string(*index));
        }
        const auto value = detail::parse_double(token.substr(colon + 1));
        if (!value) {
            throw ParseError(line_no, "non-finite or malformed value in '" + std::string(token) + "'");
        }
        previous = static_cast<int>(*index);
        sample.features.push_back({previous, *value});
    }
    return sample;
}

} // namespace

Dataset parse_sparse(std::string_view text) {
    std::vector<Sample> samples;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto newline = text.find('\n', pos);
        auto line = text.substr(pos, newline == std::string_view::npos ? std::string_view::npos : newline - pos);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        if (!split_tokens(line).empty()) {
            samples.push_back(parse_record(line, line_no));
        }
        if (newline == std::string_view::npos) {
            break;
        }
        pos = newline + 1;
    }
    if (samples.empty()) {
        throw ParseError(line_no, "empty dataset");
    }
    return Dataset(std::move(samples));
}

Dataset load_sparse(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_sparse(buffer.str());
}

std::string to_sparse(const Dataset& dataset) {
    std::string out;
    for (const auto& s : dataset.samples()) {
        out += std::to_string(s.label);
        for (const auto& f : s.features) {
            out += ' ';
            out += std::to_string(f.index);
            out += ':';
            out += detail::shortest(f.value);
        }
        out += '\n';
    }
    return out;
}

std::vector<std::size_t> FoldPlan::test_indices(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        if (assignment[i] == fold) {
            out.push_back(i);
        }
    }
    return out;
}

std::vector<std::size_t> FoldPlan::train_indices(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        if (assignment[i] != fold) {
            out.push_back(i);
        }
    }
    return out;
}

FoldPlan split_kfold(const Dataset& dataset, int k, std::uint64_t seed) {
    if (k < 2) {
        throw std::invalid_argument("fold count must be at least 2");
    }
    if (static_cast<std::size_t>(k) > dataset.size()) {
        throw std::invalid_argument("fold count " + std::to_string(k) + " exceeds sample count " +
                                    std::to_string(dataset.size()));
    }

    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        by_class[dataset[i].label].push_back(i);
    }

    detail::Engine engine(seed);
    FoldPlan plan{k, std::vector<int>(dataset.size(), -1)};
    std::size_t cursor = 0;
    for (auto& [label, members] : by_class) {
        detail::shuffle(engine, members);
        for (auto i : members) {
            plan.assignment[i] = static_cast<int>(cursor % static_cast<std::size_t>(k));
            ++cursor;
        }
    }
    return plan;
}

} // namespace svmlab
