#include "svmlab/calibration.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace svmlab {

std::vector<double> cv_decision_values(const Dataset& dataset, const TrainParams& params, const FoldPlan& folds,
                                       const SolverConfig& config) {
    if (folds.assignment.size() != dataset.size()) {
        throw std::invalid_argument("fold plan does not match dataset size");
    }
    std::vector<double> values(dataset.size(), 0.0);
    for (int fold = 0; fold < folds.k; ++fold) {
        const auto train = folds.train_indices(fold);
        if (train.empty()) {
            throw FoldError(fold, "no training samples outside this fold");
        }
        BinaryModel model;
        try {
            model = train_binary(dataset.subset(train), params, config);
        } catch (const std::exception& e) {
            throw FoldError(fold, e.what());
        }
        for (auto i : folds.test_indices(fold)) {
            values[i] = decision_value(model, dataset[i].features);
        }
    }
    return values;
}

double pairwise_prob(const SigmoidParams& params, double f) {
    const double z = params.A * f + params.B;
    if (z >= 0.0) {
        const double e = std::exp(-z);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(z));
}

namespace {

struct Targets {
    std::vector<double> t;
    double positive = 0.0;
    double negative = 0.0;
};

Targets smoothed_targets(std::span<const double> values, std::span<const int> labels) {
    if (values.size() != labels.size()) {
        throw std::invalid_argument("decision values and labels differ in length");
    }
    if (values.size() < 2) {
        throw std::invalid_argument("sigmoid fitting needs at least two samples");
    }
    Targets out;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == 1) {
            out.positive += 1.0;
        } else if (labels[i] == -1) {
            out.negative += 1.0;
        } else {
            throw std::invalid_argument("sigmoid labels must be +1 or -1");
        }
        if (!std::isfinite(values[i])) {
            throw std::invalid_argument("decision values must be finite");
        }
    }
    if (out.positive == 0.0 || out.negative == 0.0) {
        throw std::invalid_argument("sigmoid fitting needs both labels");
    }
    const double hi = (out.positive + 1.0) / (out.positive + 2.0);
    const double lo = 1.0 / (out.negative + 2.0);
    out.t.reserve(labels.size());
    for (int y : labels) {
        out.t.push_back(y == 1 ? hi : lo);
    }
    return out;
}

// -sum t log p + (1 - t) log(1 - p) with p = 1 / (1 + exp(z)), z = A f + B,
// written to avoid overflow in exp.
double nll(const SigmoidParams& params, std::span<const double> values, const std::vector<double>& t) {
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double z = params.A * values[i] + params.B;
        if (z >= 0.0) {
            sum += t[i] * z + std::log1p(std::exp(-z));
        } else {
            sum += (t[i] - 1.0) * z + std::log1p(std::exp(z));
        }
    }
    return sum;
}

} // namespace

double sigmoid_nll(const SigmoidParams& params, std::span<const double> values, std::span<const int> labels) {
    return nll(params, values, smoothed_targets(values, labels).t);
}

SigmoidParams fit_sigmoid(std::span<const double> values, std::span<const int> labels) {
    const auto targets = smoothed_targets(values, labels);
    const auto& t = targets.t;
    constexpr int kMaxIterations = 100;
    constexpr double kGradientTolerance = 1e-8;
    constexpr double kMinStep = 1e-10;
    constexpr double kRidge = 1e-12;

    SigmoidParams params{0.0, std::log((targets.negative + 1.0) / (targets.positive + 1.0))};
    double value = nll(params, values, t);
    for (int iteration = 0; iteration < kMaxIterations; ++iteration) {
        double h11 = kRidge;
        double h22 = kRidge;
        double h21 = 0.0;
        double g1 = 0.0;
        double g2 = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i) {
            const double p = pairwise_prob(params, values[i]);
            const double q = 1.0 - p;
            const double d2 = p * q;
            h11 += values[i] * values[i] * d2;
            h22 += d2;
            h21 += values[i] * d2;
            const double d1 = t[i] - p;
            g1 += values[i] * d1;
            g2 += d1;
        }
        if (std::hypot(g1, g2) <= kGradientTolerance) {
            return params;
        }

        const double det = h11 * h22 - h21 * h21;
        const double dA = -(h22 * g1 - h21 * g2) / det;
        const double dB = -(-h21 * g1 + h11 * g2) / det;
        const double slope = g1 * dA + g2 * dB;

        double step = 1.0;
        bool accepted = false;
        while (step >= kMinStep) {
            const SigmoidParams trial{params.A + step * dA, params.B + step * dB};
            const double trial_value = nll(trial, values, t);
            if (trial_value < value + 1e-4 * step * slope) {
                params = trial;
                value = trial_value;
                accepted = true;
                break;
            }
            step /= 2.0;
        }
        if (!accepted) {
            // No representable decrease remains along the Newton direction.
            if (std::hypot(g1, g2) <= 1e-5 * static_cast<double>(values.size())) {
                return params;
            }
            throw ConvergenceError("sigmoid fit: line search failed with gradient norm " +
                                   std::to_string(std::hypot(g1, g2)));
        }
    }
    throw ConvergenceError("sigmoid fit did not converge within 100 Newton iterations");
}

PairwiseProbMatrix::PairwiseProbMatrix(std::size_t classes) : n_(classes), r_(classes * classes, 0.0) {
    if (classes < 2) {
        throw std::invalid_argument("pairwise coupling needs at least two classes");
    }
}

void PairwiseProbMatrix::set(std::size_t i, std::size_t j, double r) {
    if (i >= n_ || j >= n_) {
        throw std::out_of_range("pairwise probability index");
    }
    if (i == j) {
        throw std::invalid_argument("pairwise probabilities need two distinct classes");
    }
    if (!(r > 0.0 && r < 1.0)) {
        throw std::invalid_argument("pairwise probabilities must lie strictly between 0 and 1");
    }
    r_[i * n_ + j] = r;
    r_[j * n_ + i] = 1.0 - r;
}

std::vector<double> couple(const PairwiseProbMatrix& r) {
    const std::size_t n = r.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!(r(i, j) > 0.0 && r(i, j) < 1.0)) {
                throw std::invalid_argument("pairwise probability matrix is incomplete");
            }
        }
    }

    // Objective is 2 p'Qp with Q_ii = sum_{j != i} r_ji^2, Q_ij = -r_ji r_ij.
    Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) {
                continue;
            }
            const auto a = static_cast<Eigen::Index>(i);
            const auto b = static_cast<Eigen::Index>(j);
            Q(a, a) += r(j, i) * r(j, i);
            Q(a, b) = -r(j, i) * r(i, j);
        }
    }

    // Stationarity Q p + mu e = 0 with e'p = 1 on the classes not pinned at
    // zero; a class whose solution goes negative is pinned and the rest re-solved.
    std::vector<bool> pinned(n, false);
    std::vector<double> p(n, 0.0);
    while (true) {
        std::vector<Eigen::Index> active;
        for (std::size_t i = 0; i < n; ++i) {
            if (!pinned[i]) {
                active.push_back(static_cast<Eigen::Index>(i));
            }
        }
        const auto k = static_cast<Eigen::Index>(active.size());
        Eigen::MatrixXd system = Eigen::MatrixXd::Zero(k + 1, k + 1);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
        for (Eigen::Index a = 0; a < k; ++a) {
            for (Eigen::Index b = 0; b < k; ++b) {
                system(a, b) = Q(active[static_cast<std::size_t>(a)], active[static_cast<std::size_t>(b)]);
            }
            system(a, k) = 1.0;
            system(k, a) = 1.0;
        }
        rhs(k) = 1.0;
        const Eigen::VectorXd x = system.fullPivLu().solve(rhs);

        bool changed = false;
        std::fill(p.begin(), p.end(), 0.0);
        for (Eigen::Index a = 0; a < k; ++a) {
            const auto i = static_cast<std::size_t>(active[static_cast<std::size_t>(a)]);
            if (x(a) < 0.0 && k > 1) {
                pinned[i] = true;
                changed = true;
            }
            p[i] = x(a);
        }
        if (!changed) {
            break;
        }
    }
    double total = 0.0;
    for (auto& v : p) {
        v = std::max(v, 0.0);
        total += v;
    }
    for (auto& v : p) {
        v /= total;
    }
    return p;
}

std::vector<double> predict_proba(const MulticlassModel& model, const SparseVector& x) {
    const std::size_t n = model.classes.size();
    PairwiseProbMatrix r(n);
    const auto slot = [&](int label) {
        return static_cast<std::size_t>(std::lower_bound(model.classes.begin(), model.classes.end(), label) -
                                        model.classes.begin());
    };
    for (const auto& machine : model.machines) {
        if (!machine.sigmoid) {
            throw std::invalid_argument("machine (" + std::to_string(machine.labels.positive) + ", " +
                                        std::to_string(machine.labels.negative) + ") has no sigmoid parameters");
        }
        const double prob = pairwise_prob(*machine.sigmoid, decision_value(machine, x));
        r.set(slot(machine.labels.positive), slot(machine.labels.negative),
              std::clamp(prob, kMinPairwiseProb, 1.0 - kMinPairwiseProb));
    }
    return couple(r);
}

void calibrate(MulticlassModel& model, const Dataset& dataset, const TrainParams& params, int k,
               std::uint64_t seed, const SolverConfig& config) {
    for (auto& machine : model.machines) {
        const auto pair = pair_subset(dataset, machine.labels.positive, machine.labels.negative);
        const int folds_used = std::min<int>(k, static_cast<int>(pair.size()));
        const auto folds = split_kfold(pair, folds_used, seed);
        std::vector<double> values;
        try {
            values = cv_decision_values(pair, params, folds, config);
        } catch (const FoldError& e) {
            throw Error("calibrating pair (" + std::to_string(machine.labels.positive) + ", " +
                        std::to_string(machine.labels.negative) + "): " + e.what());
        }
        const auto labels = pair.labels();
        machine.sigmoid = fit_sigmoid(values, labels);
    }
}

} // namespace svmlab
