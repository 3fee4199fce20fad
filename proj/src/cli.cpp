#include "svmlab/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>

#include "svmlab/calibration.hpp"
#include "svmlab/dataset.hpp"
#include "svmlab/detail/format.hpp"
#include "svmlab/model_selection.hpp"
#include "svmlab/risk.hpp"
#include "svmlab/svc.hpp"

namespace svmlab {

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << contents) || !out.flush()) {
        throw Error("cannot write '" + path + "'");
    }
}

KernelSpec kernel_flag(const std::string& text) {
    try {
        return KernelSpec::parse(text);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

std::vector<long> h_range(const std::string& text) {
    const auto colon = text.find(':');
    const auto lo = detail::parse_integer(text.substr(0, colon));
    const auto hi = colon == std::string::npos ? lo : detail::parse_integer(text.substr(colon + 1));
    if (!lo || !hi || *lo < 1 || *hi < *lo) {
        throw UsageError("--h expects <h> or <lo>:<hi> with 1 <= lo <= hi");
    }
    std::vector<long> values;
    for (long long h = *lo; h <= *hi; ++h) {
        values.push_back(static_cast<long>(h));
    }
    return values;
}

struct TrainOptions {
    std::string kernel = "linear";
    std::optional<double> C;
    double tol = 1e-3;
    bool probability = false;
    int folds = 5;
    std::uint64_t seed = 0;
    std::string data;
    std::string model;
};

int train_command(const TrainOptions& opt, std::ostream& out, std::ostream& err) {
    const TrainParams params{kernel_flag(opt.kernel), opt.C.value_or(kHardMarginC)};
    if (!(params.C > 0.0)) {
        throw UsageError("-c must be positive");
    }
    const SolverConfig config{opt.tol, 0, false};
    const auto dataset = load_sparse(opt.data);
    auto model = train_multiclass(dataset, params, config);
    if (opt.probability) {
        calibrate(model, dataset, params, opt.folds, opt.seed, config);
    }
    write_file(opt.model, save_model(model));

    std::size_t correct = 0;
    std::size_t support_vectors = 0;
    for (const auto& s : dataset.samples()) {
        correct += predict_multiclass(model, s.features) == s.label ? 1 : 0;
    }
    for (const auto& machine : model.machines) {
        support_vectors += machine.coefficients.size();
        err << "pair (" << machine.labels.positive << ", " << machine.labels.negative
            << "): " << machine.coefficients.size() << " support vectors, " << machine.diagnostics.iterations
            << " iterations, KKT residual " << detail::shortest(machine.diagnostics.kkt_residual) << '\n';
    }
    out << "classes " << model.classes.size() << ", machines " << model.machines.size() << ", support vectors "
        << support_vectors << '\n';
    out << "training accuracy " << detail::shortest(static_cast<double>(correct) / static_cast<double>(dataset.size()))
        << " (" << correct << '/' << dataset.size() << ")\n";
    return 0;
}

int predict_command(const std::string& model_path, const std::string& probes_path, const std::string& out_path,
                    bool probabilities) {
    const auto model = load_model(read_file(model_path));
    const auto probes = load_sparse(probes_path);
    std::string text;
    if (probabilities) {
        text += "labels";
        for (int c : model.classes) {
            text += ' ' + std::to_string(c);
        }
        text += '\n';
    }
    for (const auto& s : probes.samples()) {
        text += std::to_string(predict_multiclass(model, s.features));
        if (probabilities) {
            for (double p : predict_proba(model, s.features)) {
                text += ' ' + detail::shortest(p);
            }
        }
        text += '\n';
    }
    write_file(out_path, text);
    return 0;
}

struct TuneOptions {
    std::string kind = "rbf";
    std::vector<double> C_values;
    std::vector<double> gamma_values;
    int folds = 5;
    std::uint64_t seed = 0;
    double tol = 1e-3;
    std::string data;
    std::string table;
};

int tune_command(const TuneOptions& opt, std::ostream& out, std::ostream& err) {
    KernelKind kind = KernelKind::rbf;
    if (opt.kind == "linear") {
        kind = KernelKind::linear;
    } else if (opt.kind != "rbf") {
        throw UsageError("tune -k expects linear or rbf");
    }
    auto grid = ParamGrid::defaults();
    if (!opt.C_values.empty()) {
        grid.C_values = opt.C_values;
    }
    if (!opt.gamma_values.empty()) {
        grid.gamma_values = opt.gamma_values;
    }
    const auto dataset = load_sparse(opt.data);
    const auto result = grid_search(dataset, grid, kind, opt.folds, opt.seed, {opt.tol, 0, false});
    write_file(opt.table, grid_csv(result));
    for (const auto& cell : result.cells) {
        if (!cell.error.empty()) {
            err << "cell C=" << detail::shortest(cell.C);
            if (cell.gamma) {
                err << " gamma=" << detail::shortest(*cell.gamma);
            }
            err << " failed: " << cell.error << '\n';
        }
    }
    const auto& best = result.cells[result.winner];
    out << "best C " << detail::shortest(best.C);
    if (best.gamma) {
        out << " gamma " << detail::shortest(*best.gamma);
    }
    out << " accuracy " << detail::shortest(best.accuracy) << '\n';
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Support vector machine training, prediction and learning-theory experiments", "svmlab"};
    app.require_subcommand(1);

    TrainOptions train;
    auto* train_cmd = app.add_subcommand("train", "Train one-against-one machines on a sparse data file");
    train_cmd->add_option("-k,--kernel", train.kernel, "linear | gaussian:<sigma> | rbf:<gamma>")->capture_default_str();
    train_cmd->add_option("-c,--C", train.C, "Soft-margin penalty C (omit for hard margin)");
    train_cmd->add_option("--tol", train.tol, "KKT violation tolerance")->capture_default_str()->check(
        CLI::PositiveNumber);
    train_cmd->add_flag("--probability", train.probability, "Fit sigmoids on cross-validated decision values");
    train_cmd->add_option("--folds", train.folds, "Calibration folds")->capture_default_str()->check(
        CLI::Range(2, 1 << 20));
    train_cmd->add_option("--seed", train.seed, "Fold shuffling seed")->capture_default_str();
    train_cmd->add_option("data", train.data, "Training data")->required();
    train_cmd->add_option("model", train.model, "Output model file")->required();

    std::string model_path;
    std::string probes_path;
    std::string out_path;
    auto* predict_cmd = app.add_subcommand("predict", "Write one predicted label per probe line");
    auto* proba_cmd = app.add_subcommand("predict-proba", "Write predicted labels and class probabilities");
    for (auto* cmd : {predict_cmd, proba_cmd}) {
        cmd->add_option("model", model_path, "Model file")->required();
        cmd->add_option("probes", probes_path, "Probe data")->required();
        cmd->add_option("output", out_path, "Output file")->required();
    }

    TuneOptions tune;
    auto* tune_cmd = app.add_subcommand("tune", "Grid search over C (and gamma) by cross-validation");
    tune_cmd->add_option("-k,--kernel", tune.kind, "linear | rbf")->capture_default_str();
    tune_cmd->add_option("--C", tune.C_values, "Comma-separated C ladder")->delimiter(',');
    tune_cmd->add_option("--gamma", tune.gamma_values, "Comma-separated gamma ladder")->delimiter(',');
    tune_cmd->add_option("--folds", tune.folds, "Cross-validation folds")->capture_default_str()->check(
        CLI::Range(2, 1 << 20));
    tune_cmd->add_option("--seed", tune.seed, "Fold shuffling seed")->capture_default_str();
    tune_cmd->add_option("--tol", tune.tol, "KKT violation tolerance")->capture_default_str()->check(
        CLI::PositiveNumber);
    tune_cmd->add_option("data", tune.data, "Training data")->required();
    tune_cmd->add_option("table", tune.table, "Output CSV")->required();

    double r_emp = 0.0;
    long m = 0;
    double eta = 0.05;
    std::string h_text;
    std::string curve_path;
    auto* risk_cmd = app.add_subcommand("riskbound", "Tabulate VC confidence and risk bound over h");
    // -h would clash with --h.
    risk_cmd->set_help_flag("--help", "Print this help message and exit");
    risk_cmd->add_option("--remp", r_emp, "Empirical risk")->required()->check(CLI::Range(0.0, 1.0));
    risk_cmd->add_option("--m", m, "Sample count")->required()->check(CLI::PositiveNumber);
    risk_cmd->add_option("--eta", eta, "Confidence parameter")->capture_default_str()->check(CLI::Range(0.0, 1.0));
    risk_cmd->add_option("--h", h_text, "<h> or <lo>:<hi>")->required();
    risk_cmd->add_option("output", curve_path, "Output CSV")->required();

    VcExperiment vc;
    bool collinear = false;
    std::string points_path;
    auto* shatter_cmd = app.add_subcommand("shatter", "Shattering and VC-dimension experiments for affine separators");
    shatter_cmd->add_option("--dim", vc.dimension, "Input dimension")->capture_default_str()->check(CLI::Range(1, 3));
    shatter_cmd->add_option("--max-points", vc.max_points, "Largest point set tried")->capture_default_str()->check(
        CLI::Range(1, 8));
    shatter_cmd->add_option("--trials", vc.trials, "Random configurations per size")->capture_default_str()->check(
        CLI::PositiveNumber);
    shatter_cmd->add_option("--seed", vc.seed, "Sampling seed")->capture_default_str();
    shatter_cmd->add_flag("--collinear", collinear, "Sample every configuration on a line");
    shatter_cmd->add_option("--points", points_path, "Check whether the points of this sparse file are shattered");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    try {
        if (train_cmd->parsed()) {
            return train_command(train, out, err);
        }
        if (predict_cmd->parsed() || proba_cmd->parsed()) {
            return predict_command(model_path, probes_path, out_path, proba_cmd->parsed());
        }
        if (tune_cmd->parsed()) {
            return tune_command(tune, out, err);
        }
        if (risk_cmd->parsed()) {
            if (!(eta > 0.0)) {
                throw UsageError("--eta must lie in (0, 1]");
            }
            const auto rows = bound_curve(r_emp, m, eta, h_range(h_text));
            write_file(curve_path, bound_curve_csv(rows));
            out << "wrote " << rows.size() << " rows to " << curve_path << '\n';
            return 0;
        }
        if (shatter_cmd->parsed()) {
            if (!points_path.empty()) {
                const auto data = load_sparse(points_path);
                std::vector<Point> points;
                for (const auto& s : data.samples()) {
                    Point p(static_cast<std::size_t>(data.dimension()), 0.0);
                    for (const auto& f : s.features) {
                        p[static_cast<std::size_t>(f.index - 1)] = f.value;
                    }
                    points.push_back(std::move(p));
                }
                out << "shattered " << (is_shattered(points) ? "yes" : "no") << '\n';
                return 0;
            }
            vc.layout = collinear ? PointLayout::collinear : PointLayout::general;
            const auto result = vc_dimension_bruteforce(vc);
            out << "size,shattered\n";
            for (std::size_t s = 0; s < result.shattered_at.size(); ++s) {
                out << s + 1 << ',' << (result.shattered_at[s] ? "yes" : "no") << '\n';
            }
            out << "vc dimension " << result.vc_dimension << '\n';
            return 0;
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

} // namespace svmlab
