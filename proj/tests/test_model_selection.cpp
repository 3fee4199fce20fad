#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fixtures.hpp"
#include "svmlab/calibration.hpp"
#include "svmlab/model_selection.hpp"

using namespace svmlab;

namespace {

// Four clusters around (+-1.5, +-1.5) labelled by the sign of x1 * x2.
Dataset noisy_xor(std::size_t per_cluster, std::uint64_t seed) {
    detail::Engine engine(seed);
    std::vector<Sample> samples;
    for (std::size_t i = 0; i < per_cluster; ++i) {
        for (int sx : {-1, 1}) {
            for (int sy : {-1, 1}) {
                samples.push_back(fixtures::sample(sx * sy, {1.5 * sx + detail::uniform_real(engine, -0.5, 0.5),
                                                             1.5 * sy + detail::uniform_real(engine, -0.5, 0.5)}));
            }
        }
    }
    return Dataset(std::move(samples));
}

double best_accuracy(const GridResult& result) {
    return result.cells[result.winner].accuracy;
}

} // namespace

TEST_CASE("default grid ladders") {
    const auto grid = ParamGrid::defaults();
    REQUIRE(grid.C_values.size() == 11);
    REQUIRE(grid.gamma_values.size() == 10);
    CHECK(grid.C_values.front() == std::ldexp(1.0, -5));
    CHECK(grid.C_values.back() == std::ldexp(1.0, 15));
    CHECK(grid.gamma_values.front() == std::ldexp(1.0, -15));
    CHECK(grid.gamma_values.back() == std::ldexp(1.0, 3));
}

TEST_CASE("cv_accuracy on a separable set is perfect") {
    const auto d = fixtures::separable(15, 2);
    const auto plan = split_kfold(d, 5, 1);
    const double accuracy = cv_accuracy(d, {KernelSpec::linear(), 1.0}, plan);
    CHECK(accuracy == 1.0);
    CHECK(cv_accuracy(d, {KernelSpec::linear(), 1.0}, plan) == accuracy);
}

TEST_CASE("cv_accuracy on random labels is near chance") {
    detail::Engine engine(77);
    std::vector<Sample> samples;
    for (int i = 0; i < 200; ++i) {
        samples.push_back(fixtures::sample(i % 2 ? 1 : -1, {detail::uniform_real(engine, -1.0, 1.0),
                                                             detail::uniform_real(engine, -1.0, 1.0)}));
    }
    const Dataset d(samples);
    const double accuracy = cv_accuracy(d, {KernelSpec::rbf(1.0), 1.0}, split_kfold(d, 5, 0));
    CHECK(std::fabs(accuracy - 0.5) <= 0.15);
}

TEST_CASE("cv_accuracy reports a fold whose remainder misses a class") {
    const Dataset d({fixtures::sample(1, {0.0}), fixtures::sample(1, {1.0}), fixtures::sample(2, {2.0}),
                     fixtures::sample(2, {3.0}), fixtures::sample(3, {4.0})});
    CHECK_THROWS_AS(cv_accuracy(d, {KernelSpec::linear(), 1.0}, split_kfold(d, 2, 0)), FoldError);
}

TEST_CASE("grid_search breaks ties toward the smallest C") {
    const auto d = fixtures::separable(10, 3);
    const auto result = grid_search(d, {{0.1, 1.0, 10.0}, {}}, KernelKind::linear, 5, 0);
    REQUIRE(result.cells.size() == 3);
    for (const auto& cell : result.cells) {
        CHECK(cell.accuracy == 1.0);
        CHECK_FALSE(cell.gamma.has_value());
    }
    CHECK(result.winner == 0);
    CHECK(result.cells[result.winner].C == 0.1);
}

TEST_CASE("a single-cell grid wins by default") {
    const auto d = fixtures::overlapping(10, 1);
    const auto result = grid_search(d, {{2.0}, {0.5}}, KernelKind::rbf, 3, 4);
    REQUIRE(result.cells.size() == 1);
    CHECK(result.winner == 0);
    CHECK(result.cells[0].gamma == 0.5);
}

TEST_CASE("rbf beats linear on noisy XOR") {
    const auto d = noisy_xor(8, 5);
    const std::vector<double> Cs{0.1, 1.0, 10.0, 100.0};
    const auto linear = grid_search(d, {Cs, {}}, KernelKind::linear, 4, 0);
    const auto rbf = grid_search(d, {Cs, {0.1, 1.0}}, KernelKind::rbf, 4, 0);
    CHECK(best_accuracy(linear) <= 0.75);
    CHECK(best_accuracy(rbf) > best_accuracy(linear));
    CHECK(best_accuracy(rbf) == 1.0);
}

TEST_CASE("the winner dominates and the table is reproducible") {
    const auto d = fixtures::blobs(8, 6);
    const ParamGrid grid{{0.25, 1.0, 4.0}, {0.01, 0.1, 1.0, 10.0}};
    const auto first = grid_search(d, grid, KernelKind::rbf, 4, 11);
    const auto second = grid_search(d, grid, KernelKind::rbf, 4, 11);
    CHECK(grid_csv(first) == grid_csv(second));
    CHECK(first.folds == split_kfold(d, 4, 11));
    for (const auto& cell : first.cells) {
        CHECK(cell.accuracy <= best_accuracy(first));
        CHECK(cell.accuracy >= 0.0);
    }
    const auto csv = grid_csv(first);
    CHECK(csv.rfind("C,gamma,accuracy\n0.25,0.01,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 13);
}

TEST_CASE("a larger grid never lowers the winning accuracy") {
    const auto d = fixtures::overlapping(12, 8);
    const auto small = grid_search(d, {{1.0}, {0.5}}, KernelKind::rbf, 4, 2);
    const auto large = grid_search(d, {{0.1, 1.0, 10.0}, {0.05, 0.5, 5.0}}, KernelKind::rbf, 4, 2);
    CHECK(best_accuracy(large) >= best_accuracy(small));
}

TEST_CASE("failed cells are recorded and skipped") {
    const auto d = fixtures::overlapping(10, 2);
    const auto result = grid_search(d, {{1e-3, 1e4}, {}}, KernelKind::linear, 3, 0, {1e-6, 40, false});
    REQUIRE(result.cells.size() == 2);
    CHECK(result.cells[0].accuracy >= 0.0);
    CHECK(result.cells[0].error.empty());
    CHECK(result.cells[1].accuracy == kFailedCell);
    CHECK_FALSE(result.cells[1].error.empty());
    CHECK(result.winner == 0);
    CHECK(grid_csv(result).find(",-1\n") != std::string::npos);

    CHECK_THROWS_AS(grid_search(d, {{1e4}, {}}, KernelKind::linear, 3, 0, {1e-6, 40, false}), Error);
}

TEST_CASE("grid_search validates the grid") {
    const auto d = fixtures::overlapping(5, 1);
    CHECK_THROWS_AS(grid_search(d, {{}, {}}, KernelKind::linear, 2, 0), std::invalid_argument);
    CHECK_THROWS_AS(grid_search(d, {{1.0, 1.0}, {}}, KernelKind::linear, 2, 0), std::invalid_argument);
    CHECK_THROWS_AS(grid_search(d, {{2.0, 1.0}, {}}, KernelKind::linear, 2, 0), std::invalid_argument);
    CHECK_THROWS_AS(grid_search(d, {{-1.0}, {}}, KernelKind::linear, 2, 0), std::invalid_argument);
    CHECK_THROWS_AS(grid_search(d, {{1.0}, {}}, KernelKind::rbf, 2, 0), std::invalid_argument);
    CHECK_THROWS_AS(grid_search(d, {{1.0}, {1.0}}, KernelKind::gaussian, 2, 0), std::invalid_argument);
    CHECK_THROWS_AS(grid_search(d, {{1.0}, {}}, KernelKind::linear, 1, 0), std::invalid_argument);
}
