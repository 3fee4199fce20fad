#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace svmlab {

/// (1/2m) sum |y_i - f_i| for +-1 predictions and labels.
double empirical_risk(std::span<const int> predictions, std::span<const int> labels);

/// Fraction of positions where prediction and label differ (any class ids).
double misclassification_rate(std::span<const int> predictions, std::span<const int> labels);

/// sqrt((h (ln(2m/h) + 1) - ln(eta/4)) / m). Throws DomainError when the
/// radicand is negative and std::invalid_argument for h < 1, m < 1 or eta
/// outside (0, 1].
double vc_confidence(long h, long m, double eta);

struct RiskBoundQuery {
    double r_emp = 0.0;
    long h = 1;
    long m = 1;
    double eta = 0.05;
};

struct RiskBoundReport {
    RiskBoundQuery query;
    double vc_confidence = 0.0;
    /// r_emp + vc_confidence: holds with probability 1 - eta.
    double bound = 0.0;
};

RiskBoundReport risk_bound(const RiskBoundQuery& query);

struct MachineCandidate {
    std::string label;
    long h = 1;
    double r_emp = 0.0;
};

/// Index of the candidate with the smallest risk bound; ties go to the
/// smaller h, then the earlier index.
std::size_t srm_select(std::span<const MachineCandidate> candidates, long m, double eta);

struct BoundRow {
    long h = 1;
    double vc_confidence = 0.0;
    double bound = 0.0;
};

std::vector<BoundRow> bound_curve(double r_emp, long m, double eta, std::span<const long> h_values);

/// `h,vc_confidence,bound` header, one row per entry, shortest round-trip reals.
std::string bound_curve_csv(std::span<const BoundRow> rows);

using Point = std::vector<double>;

/// Decides whether a +-1 labelling of points is realised with zero training
/// errors by some member of a function class.
using Separator = std::function<bool(std::span<const Point>, std::span<const int>)>;

/// Affine linear separability through the hard-margin trainer. A labelling
/// counts as realised when the solver finds every y_i f(x_i) >= 1e-6 with no
/// multiplier at the hard-margin bound; an inseparable set drives the
/// multipliers onto that bound because the hard-margin dual is unbounded.
bool hard_margin_separable(std::span<const Point> points, std::span<const int> labels);

/// True iff every one of the 2^s labellings is realised. Constant labellings
/// are realised by the bias alone and are not passed to the separator.
/// Requires 1 <= s <= 20.
bool is_shattered(std::span<const Point> points, const Separator& separator = hard_margin_separable);

enum class PointLayout { general, collinear };

struct VcExperiment {
    int dimension = 2;
    int max_points = 8;
    int trials = 200;
    std::uint64_t seed = 0;
    PointLayout layout = PointLayout::general;
};

struct VcResult {
    int vc_dimension = 0;
    /// shattered_at[s - 1] is true when some tested set of s points shattered.
    std::vector<bool> shattered_at;
};

/// Largest s <= max_points for which some sampled configuration of s points
/// in [-1, 1]^dimension is shattered by affine separators. Requires
/// dimension <= 3 and max_points <= 8.
VcResult vc_dimension_bruteforce(const VcExperiment& experiment);

} // namespace svmlab
