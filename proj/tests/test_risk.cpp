#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "svmlab/detail/random.hpp"
#include "svmlab/error.hpp"
#include "svmlab/risk.hpp"

using namespace svmlab;

namespace {

// sqrt((10 (ln 200 + 1) - ln(0.0125)) / 1000), evaluated at 40 digits.
constexpr double kConfidence_10_1000 = 0.2595480693439160382821488006131910470856;

} // namespace

TEST_CASE("empirical_risk examples") {
    const std::vector<int> y{1, -1, 1, -1};
    CHECK(empirical_risk(y, y) == 0.0);
    CHECK(empirical_risk(std::vector<int>{-1, 1, -1, 1}, y) == 1.0);
    CHECK(empirical_risk(std::vector<int>{1, -1, 1, 1}, y) == 0.25);
    CHECK_THROWS_AS(empirical_risk(std::vector<int>{1}, y), std::invalid_argument);
    CHECK_THROWS_AS(empirical_risk(std::vector<int>{2, 1, 1, 1}, y), std::invalid_argument);
    CHECK(misclassification_rate(std::vector<int>{3, 2, 1}, std::vector<int>{3, 1, 1}) == doctest::Approx(1.0 / 3));
}

TEST_CASE("empirical_risk is a multiple of 1/m in [0, 1]") {
    detail::Engine engine(2);
    for (int trial = 0; trial < 100; ++trial) {
        const auto m = 1 + detail::uniform_index(engine, 20);
        std::vector<int> f(m);
        std::vector<int> y(m);
        for (std::size_t i = 0; i < m; ++i) {
            f[i] = detail::uniform_index(engine, 2) ? 1 : -1;
            y[i] = detail::uniform_index(engine, 2) ? 1 : -1;
        }
        const double r = empirical_risk(f, y);
        CHECK(r >= 0.0);
        CHECK(r <= 1.0);
        const double scaled = r * static_cast<double>(m);
        CHECK(scaled == std::round(scaled));
    }
}

TEST_CASE("vc_confidence examples") {
    CHECK(std::fabs(vc_confidence(10, 1000, 0.05) - kConfidence_10_1000) <= 1e-12);
    CHECK(vc_confidence(10, 1000, 0.01) > vc_confidence(10, 1000, 0.05));
    CHECK_THROWS_AS(vc_confidence(100, 1, 0.05), DomainError);
    CHECK_THROWS_AS(vc_confidence(0, 10, 0.05), std::invalid_argument);
    CHECK_THROWS_AS(vc_confidence(1, 0, 0.05), std::invalid_argument);
    CHECK_THROWS_AS(vc_confidence(1, 10, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(vc_confidence(1, 10, 1.5), std::invalid_argument);
}

TEST_CASE("vc_confidence grows with h and shrinks with m") {
    for (long m : {100L, 1000L, 100000L}) {
        double previous = 0.0;
        for (long h = 1; h <= 100; ++h) {
            const double v = vc_confidence(h, m, 0.05);
            CHECK(v > previous);
            previous = v;
        }
    }
    for (long h : {1L, 10L, 50L}) {
        double previous = INFINITY;
        for (long m = 100; m <= 100000; m *= 3) {
            const double v = vc_confidence(h, m, 0.05);
            CHECK(v < previous);
            previous = v;
        }
    }
}

TEST_CASE("risk_bound examples") {
    const auto zero = risk_bound({0.0, 7, 500, 0.1});
    CHECK(zero.bound == zero.vc_confidence);
    CHECK(zero.vc_confidence == vc_confidence(7, 500, 0.1));

    const auto report = risk_bound({0.1, 10, 1000, 0.05});
    CHECK(std::fabs(report.bound - 0.3595480693439160382821488006131910470856) <= 1e-12);

    CHECK(risk_bound({1.0, 1, 100000000, 0.05}).bound - 1.0 < 1e-3);
    CHECK_THROWS_AS(risk_bound({1.5, 1, 10, 0.05}), std::invalid_argument);
    CHECK_THROWS_AS(risk_bound({0.0, 100, 1, 0.05}), DomainError);
}

TEST_CASE("srm_select examples") {
    const std::vector<MachineCandidate> same_risk{{"small", 5, 0.1}, {"large", 50, 0.1}};
    CHECK(srm_select(same_risk, 1000, 0.05) == 0);

    // Bounds 0.47131078... and 0.18813698... at 40 digits.
    const std::vector<MachineCandidate> tradeoff{{"a", 5, 0.4}, {"b", 50, 0.0}};
    CHECK(srm_select(tradeoff, 10000, 0.05) == 1);
    CHECK(std::fabs(risk_bound({0.4, 5, 10000, 0.05}).bound - 0.471310780976780796974668225105114442813) <= 1e-12);
    CHECK(std::fabs(risk_bound({0.0, 50, 10000, 0.05}).bound - 0.1881369857285039477082648122505127451545) <= 1e-12);

    CHECK(srm_select(std::vector<MachineCandidate>{{"only", 3, 0.2}}, 100, 0.05) == 0);
    CHECK_THROWS_AS(srm_select(std::vector<MachineCandidate>{}, 100, 0.05), std::invalid_argument);
}

TEST_CASE("srm_select ties go to the smaller h, then the earlier index") {
    const std::vector<MachineCandidate> duplicates{{"x", 4, 0.2}, {"y", 4, 0.2}, {"z", 9, 0.5}};
    CHECK(srm_select(duplicates, 1000, 0.05) == 0);
}

TEST_CASE("srm_select does not depend on candidate order") {
    detail::Engine engine(5);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<MachineCandidate> candidates;
        const auto n = 1 + detail::uniform_index(engine, 8);
        for (std::size_t i = 0; i < n; ++i) {
            // Distinct h values keep the winner unique up to exact bound ties.
            candidates.push_back({std::to_string(i), static_cast<long>(1 + 7 * i + detail::uniform_index(engine, 5)),
                                  static_cast<double>(detail::uniform_index(engine, 11)) / 10.0});
        }
        const auto winner = candidates[srm_select(candidates, 5000, 0.05)];
        detail::shuffle(engine, candidates);
        const auto again = candidates[srm_select(candidates, 5000, 0.05)];
        CHECK(again.label == winner.label);
    }
}

TEST_CASE("bound_curve rows agree with risk_bound") {
    const std::vector<long> one{1};
    const auto single = bound_curve(0.0, 100, 0.05, one);
    REQUIRE(single.size() == 1);
    CHECK(single[0].bound == single[0].vc_confidence);

    std::vector<long> hs(100);
    for (long h = 1; h <= 100; ++h) {
        hs[static_cast<std::size_t>(h - 1)] = h;
    }
    const auto rows = bound_curve(0.05, 1000, 0.05, hs);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto direct = risk_bound({0.05, rows[i].h, 1000, 0.05});
        CHECK(rows[i].bound == direct.bound);
        CHECK(rows[i].vc_confidence == direct.vc_confidence);
        if (i > 0) {
            CHECK(rows[i].vc_confidence > rows[i - 1].vc_confidence);
        }
    }
    const auto csv = bound_curve_csv(single);
    CHECK(csv.rfind("h,vc_confidence,bound\n1,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
}

TEST_CASE("is_shattered examples") {
    const std::vector<Point> triangle{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
    CHECK(is_shattered(triangle));
    const std::vector<Point> square{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}};
    CHECK_FALSE(is_shattered(square));
    const std::vector<Point> twins{{0.5, 0.5}, {0.5, 0.5}};
    CHECK_FALSE(is_shattered(twins));
    const std::vector<Point> line{{0.0, 0.0}, {1.0, 1.0}, {2.0, 2.0}};
    CHECK_FALSE(is_shattered(line));

    const std::vector<int> xor_labels{1, -1, -1, 1};
    CHECK_FALSE(hard_margin_separable(square, xor_labels));
    CHECK(hard_margin_separable(square, std::vector<int>{1, 1, -1, -1}));

    CHECK_THROWS_AS(is_shattered(std::vector<Point>{}), std::invalid_argument);
}

TEST_CASE("is_shattered consults the separator on every non-constant labelling") {
    const std::vector<Point> points{{0.0}, {1.0}, {2.0}, {3.0}};
    int calls = 0;
    const Separator anything = [&](std::span<const Point>, std::span<const int>) {
        ++calls;
        return true;
    };
    CHECK(is_shattered(points, anything));
    CHECK(calls == 14);
}

TEST_CASE("all labellings of a non-collinear triple are separable") {
    const std::vector<Point> triangle{{-0.3, 0.2}, {0.8, -0.5}, {0.1, 0.9}};
    for (int mask = 0; mask < 8; ++mask) {
        std::vector<int> labels;
        for (int i = 0; i < 3; ++i) {
            labels.push_back(mask >> i & 1 ? 1 : -1);
        }
        if (mask != 0 && mask != 7) {
            CHECK(hard_margin_separable(triangle, labels));
        }
    }
}

TEST_CASE("supersets of non-shattered sets are not shattered") {
    detail::Engine engine(10);
    int checked = 0;
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<Point> points;
        for (int i = 0; i < 4; ++i) {
            points.push_back({detail::uniform_real(engine, -1.0, 1.0), detail::uniform_real(engine, -1.0, 1.0)});
        }
        if (is_shattered(points)) {
            continue;
        }
        ++checked;
        points.push_back({detail::uniform_real(engine, -1.0, 1.0), detail::uniform_real(engine, -1.0, 1.0)});
        CHECK_FALSE(is_shattered(points));
    }
    CHECK(checked == 40);
}

TEST_CASE("VC dimension of affine separators") {
    CHECK(vc_dimension_bruteforce({1, 5, 50, 0, PointLayout::general}).vc_dimension == 2);

    const auto plane = vc_dimension_bruteforce({2, 6, 200, 0, PointLayout::general});
    CHECK(plane.vc_dimension == 3);
    CHECK(plane.shattered_at == std::vector<bool>{true, true, true, false, false, false});

    CHECK(vc_dimension_bruteforce({2, 5, 200, 1, PointLayout::collinear}).vc_dimension == 2);

    CHECK_THROWS_AS(vc_dimension_bruteforce({4, 5, 10, 0, PointLayout::general}), std::invalid_argument);
    CHECK_THROWS_AS(vc_dimension_bruteforce({2, 9, 10, 0, PointLayout::general}), std::invalid_argument);
}
