#include "svmlab/risk.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "svmlab/dataset.hpp"
#include "svmlab/detail/format.hpp"
#include "svmlab/detail/random.hpp"
#include "svmlab/dual_solver.hpp"
#include "svmlab/error.hpp"
#include "svmlab/kernels.hpp"

namespace svmlab {

double empirical_risk(std::span<const int> predictions, std::span<const int> labels) {
    if (predictions.size() != labels.size()) {
        throw std::invalid_argument("predictions and labels differ in length");
    }
    if (labels.empty()) {
        throw std::invalid_argument("empirical risk needs at least one sample");
    }
    long total = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if ((labels[i] != 1 && labels[i] != -1) || (predictions[i] != 1 && predictions[i] != -1)) {
            throw std::invalid_argument("empirical risk expects +1/-1 values");
        }
        total += std::abs(labels[i] - predictions[i]);
    }
    return static_cast<double>(total) / (2.0 * static_cast<double>(labels.size()));
}

double misclassification_rate(std::span<const int> predictions, std::span<const int> labels) {
    if (predictions.size() != labels.size()) {
        throw std::invalid_argument("predictions and labels differ in length");
    }
    if (labels.empty()) {
        throw std::invalid_argument("misclassification rate needs at least one sample");
    }
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        wrong += predictions[i] != labels[i] ? 1 : 0;
    }
    return static_cast<double>(wrong) / static_cast<double>(labels.size());
}

double vc_confidence(long h, long m, double eta) {
    if (h < 1) {
        throw std::invalid_argument("VC dimension must be at least 1");
    }
    if (m < 1) {
        throw std::invalid_argument("sample count must be at least 1");
    }
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw std::invalid_argument("eta must lie in (0, 1]");
    }
    const double hd = static_cast<double>(h);
    const double md = static_cast<double>(m);
    const double radicand = (hd * (std::log(2.0 * md / hd) + 1.0) - std::log(eta / 4.0)) / md;
    if (radicand < 0.0) {
        throw DomainError("VC confidence undefined: negative radicand for h=" + std::to_string(h) +
                          ", m=" + std::to_string(m) + ", eta=" + detail::shortest(eta));
    }
    return std::sqrt(radicand);
}

RiskBoundReport risk_bound(const RiskBoundQuery& query) {
    if (!(query.r_emp >= 0.0 && query.r_emp <= 1.0)) {
        throw std::invalid_argument("empirical risk must lie in [0, 1]");
    }
    RiskBoundReport report;
    report.query = query;
    report.vc_confidence = vc_confidence(query.h, query.m, query.eta);
    report.bound = query.r_emp + report.vc_confidence;
    return report;
}

std::size_t srm_select(std::span<const MachineCandidate> candidates, long m, double eta) {
    if (candidates.empty()) {
        throw std::invalid_argument("structural risk minimisation needs at least one candidate");
    }
    std::size_t best = 0;
    double best_bound = risk_bound({candidates[0].r_emp, candidates[0].h, m, eta}).bound;
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        const double bound = risk_bound({candidates[i].r_emp, candidates[i].h, m, eta}).bound;
        if (bound < best_bound || (bound == best_bound && candidates[i].h < candidates[best].h)) {
            best = i;
            best_bound = bound;
        }
    }
    return best;
}

std::vector<BoundRow> bound_curve(double r_emp, long m, double eta, std::span<const long> h_values) {
    std::vector<BoundRow> rows;
    rows.reserve(h_values.size());
    for (long h : h_values) {
        const auto report = risk_bound({r_emp, h, m, eta});
        rows.push_back({h, report.vc_confidence, report.bound});
    }
    return rows;
}

std::string bound_curve_csv(std::span<const BoundRow> rows) {
    std::string out = "h,vc_confidence,bound\n";
    for (const auto& row : rows) {
        out += std::to_string(row.h) + ',' + detail::shortest(row.vc_confidence) + ',' + detail::shortest(row.bound) +
               '\n';
    }
    return out;
}

bool hard_margin_separable(std::span<const Point> points, std::span<const int> labels) {
    if (points.size() != labels.size() || points.empty()) {
        throw std::invalid_argument("separability check needs one label per point");
    }
    const bool has_positive = std::find(labels.begin(), labels.end(), 1) != labels.end();
    const bool has_negative = std::find(labels.begin(), labels.end(), -1) != labels.end();
    if (!has_positive || !has_negative) {
        return true;
    }

    std::vector<SparseVector> xs;
    xs.reserve(points.size());
    for (const auto& p : points) {
        xs.push_back(from_dense(p));
    }
    const DualProblem problem(gram(KernelSpec::linear(), xs), std::vector<int>(labels.begin(), labels.end()),
                              kHardMarginC);
    const auto solution = solve(problem);
    const double at_bound = kHardMarginC - bound_threshold(kHardMarginC);
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (solution.alpha[i] >= at_bound) {
            return false;
        }
        double f = solution.b;
        for (std::size_t j = 0; j < points.size(); ++j) {
            f += solution.alpha[j] * labels[j] * problem.gram()(i, j);
        }
        if (labels[i] * f < 1e-6) {
            return false;
        }
    }
    return true;
}

bool is_shattered(std::span<const Point> points, const Separator& separator) {
    const std::size_t s = points.size();
    if (s < 1 || s > 20) {
        throw std::invalid_argument("shattering checks are limited to 1..20 points");
    }
    const std::uint32_t all = (1U << s) - 1;
    std::vector<int> labels(s);
    for (std::uint32_t code = 1; code < all; ++code) {
        for (std::size_t i = 0; i < s; ++i) {
            labels[i] = (code >> i) & 1U ? 1 : -1;
        }
        if (!separator(points, labels)) {
            return false;
        }
    }
    return true;
}

namespace {

Point random_point(detail::Engine& engine, int dimension) {
    Point p(static_cast<std::size_t>(dimension));
    for (auto& v : p) {
        v = detail::uniform_real(engine, -1.0, 1.0);
    }
    return p;
}

std::vector<Point> sample_configuration(detail::Engine& engine, int dimension, int count, PointLayout layout) {
    std::vector<Point> points;
    if (layout == PointLayout::general) {
        for (int i = 0; i < count; ++i) {
            points.push_back(random_point(engine, dimension));
        }
        return points;
    }
    const Point origin = random_point(engine, dimension);
    Point direction = random_point(engine, dimension);
    double norm = 0.0;
    for (double v : direction) {
        norm += v * v;
    }
    norm = std::sqrt(norm);
    if (norm == 0.0) {
        direction.assign(direction.size(), 0.0);
        direction[0] = 1.0;
        norm = 1.0;
    }
    for (int i = 0; i < count; ++i) {
        const double t = detail::uniform_real(engine, -1.0, 1.0);
        Point p(origin);
        for (std::size_t d = 0; d < p.size(); ++d) {
            p[d] += 0.5 * t * direction[d] / norm;
        }
        points.push_back(std::move(p));
    }
    return points;
}

} // namespace

VcResult vc_dimension_bruteforce(const VcExperiment& experiment) {
    if (experiment.dimension < 1 || experiment.dimension > 3) {
        throw std::invalid_argument("VC experiments support dimensions 1..3");
    }
    if (experiment.max_points < 1 || experiment.max_points > 8) {
        throw std::invalid_argument("VC experiments support at most 8 points");
    }
    if (experiment.trials < 1) {
        throw std::invalid_argument("VC experiments need at least one trial per size");
    }
    detail::Engine engine(experiment.seed);
    VcResult result;
    result.shattered_at.assign(static_cast<std::size_t>(experiment.max_points), false);
    for (int s = 1; s <= experiment.max_points; ++s) {
        for (int trial = 0; trial < experiment.trials; ++trial) {
            const auto points = sample_configuration(engine, experiment.dimension, s, experiment.layout);
            if (is_shattered(points)) {
                result.shattered_at[static_cast<std::size_t>(s - 1)] = true;
                result.vc_dimension = s;
                break;
            }
        }
    }
    return result;
}

} // namespace svmlab
