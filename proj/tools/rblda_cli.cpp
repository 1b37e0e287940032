// Experiment harness: dataset synthesis, single fits, cross-validated
// model selection, the full split/evaluate protocol and the grid-size
// benchmark. Outputs are CSV; exit codes are 0 (ok), 2 (input error),
// 3 (numerical degeneracy), 4 (method unavailable on this data).

#include <CLI11.hpp>

#include "rblda/errors.hpp"
#include "rblda/experiment.hpp"
#include "rblda/model_io.hpp"

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::vector<double> parse_grid(const std::string& csv) {
    std::vector<double> values;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        values.push_back(std::stod(item));
    }
    if (values.empty()) {
        throw rblda::input_error("empty candidate grid \"" + csv + "\"");
    }
    return values;
}

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> values;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        values.push_back(std::stoi(item));
    }
    if (values.empty()) {
        throw rblda::input_error("empty list \"" + csv + "\"");
    }
    return values;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) {
        throw rblda::input_error("cannot write " + path);
    }
    out << text;
    if (!out.flush()) {
        throw rblda::input_error("write failed for " + path);
    }
}

/// "key = value" lines; '#' starts a comment. Keys mirror the evaluate
/// flags; explicit flags override the file.
void apply_config_file(const std::string& path, rblda::ExperimentConfig& config,
                       std::string& fixed_test) {
    std::ifstream in(path);
    if (!in) {
        throw rblda::input_error("cannot open config " + path);
    }
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            if (a == std::string::npos) return std::string();
            const auto b = s.find_last_not_of(" \t\r");
            return s.substr(a, b - a + 1);
        };
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw rblda::input_error(path + ":" + std::to_string(lineno) +
                                     ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "method") {
            config.method = rblda::method_from_string(value);
        } else if (key == "proportion") {
            config.train_proportion = std::stod(value);
        } else if (key == "splits") {
            config.n_splits = std::stoi(value);
        } else if (key == "folds") {
            config.cv_folds = std::stoi(value);
        } else if (key == "grid") {
            config.grid1 = parse_grid(value);
        } else if (key == "grid2") {
            config.grid2 = parse_grid(value);
        } else if (key == "seed") {
            config.seed = std::stoull(value);
        } else if (key == "scaling") {
            config.scaling = rblda::scaling_policy_from_string(value);
        } else if (key == "workers") {
            config.workers = std::stoi(value);
        } else if (key == "fixed-test") {
            fixed_test = value;
        } else if (key == "q1") {
            config.bpca_q1 = std::stol(value);
        } else if (key == "q2") {
            config.bpca_q2 = std::stol(value);
        } else {
            throw rblda::input_error(path + ":" + std::to_string(lineno) +
                                     ": unknown key \"" + key + "\"");
        }
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bilinear and vector discriminant analysis experiments"};
    app.require_subcommand(1);

    // --- synth ---
    auto* synth = app.add_subcommand("synth", "Generate a separable synthetic dataset");
    std::uint64_t synth_d1 = 8, synth_d2 = 4, synth_per_class = 20, synth_classes = 2;
    double synth_gap = 5.0, synth_sigma = 1.0;
    std::uint64_t synth_seed = 0;
    std::string synth_out;
    synth->add_option("--d1", synth_d1, "Rows per observation")->required();
    synth->add_option("--d2", synth_d2, "Columns per observation")->required();
    synth->add_option("--classes", synth_classes, "Number of classes")->required();
    synth->add_option("--per-class", synth_per_class, "Observations per class")->required();
    synth->add_option("--gap", synth_gap, "Mean separation between consecutive classes");
    synth->add_option("--sigma", synth_sigma, "Noise standard deviation");
    synth->add_option("--seed", synth_seed, "Generator seed");
    synth->add_option("--out", synth_out, "Output .mts path")->required();

    // --- fit ---
    auto* fit = app.add_subcommand("fit", "Fit one model and write it to a file");
    std::string fit_data, fit_method = "rblda", fit_scaling = "w", fit_out;
    double fit_r1 = 0.5, fit_r2 = 0.5;
    std::int64_t fit_q1 = 0, fit_q2 = 0;
    fit->add_option("--data", fit_data, "Training .mts path")->required();
    fit->add_option("--method", fit_method, "rblda|rlda|blda|pblda|bpca");
    fit->add_option("--r1", fit_r1, "Column-direction regularization");
    fit->add_option("--r2", fit_r2, "Row-direction regularization");
    fit->add_option("--scaling", fit_scaling, "Basis scaling: w|t|unit");
    fit->add_option("--q1", fit_q1, "BPCA row-basis size (0 = full rank)");
    fit->add_option("--q2", fit_q2, "BPCA column-basis size (0 = full rank)");
    fit->add_option("--out", fit_out, "Output model path")->required();

    // --- crossval ---
    auto* crossval = app.add_subcommand("crossval", "Cross-validated grid search");
    std::string cv_data, cv_method = "rblda", cv_grid, cv_grid2, cv_scaling = "w", cv_out;
    int cv_folds = 5, cv_workers = 1;
    std::uint64_t cv_seed = 0;
    crossval->add_option("--data", cv_data, "Training .mts path")->required();
    crossval->add_option("--method", cv_method, "rblda|rlda");
    crossval->add_option("--grid", cv_grid, "Comma-separated r1 candidates");
    crossval->add_option("--grid2", cv_grid2, "Comma-separated r2 candidates");
    crossval->add_option("--folds", cv_folds, "Number of folds");
    crossval->add_option("--seed", cv_seed, "Fold seed");
    crossval->add_option("--scaling", cv_scaling, "Basis scaling: w|t");
    crossval->add_option("--workers", cv_workers, "Fold worker threads");
    crossval->add_option("--out", cv_out, "Output CSV path (- for stdout)");

    // --- evaluate ---
    auto* evaluate = app.add_subcommand("evaluate", "Full split/CV/sweep protocol");
    std::string eval_data, eval_config, eval_method, eval_grid, eval_grid2, eval_scaling,
        eval_fixed_test, eval_out;
    double eval_proportion = -1.0;
    int eval_splits = -1, eval_folds = -1, eval_workers = -1;
    std::int64_t eval_seed = -1;
    evaluate->add_option("--data", eval_data, "Dataset .mts path")->required();
    evaluate->add_option("--config", eval_config, "key = value config file");
    evaluate->add_option("--method", eval_method, "rblda|rlda|blda|pblda|bpca");
    evaluate->add_option("--proportion", eval_proportion, "Training proportion per class");
    evaluate->add_option("--splits", eval_splits, "Number of random splits");
    evaluate->add_option("--folds", eval_folds, "CV folds per split");
    evaluate->add_option("--grid", eval_grid, "Comma-separated r1 candidates");
    evaluate->add_option("--grid2", eval_grid2, "Comma-separated r2 candidates");
    evaluate->add_option("--seed", eval_seed, "Base seed");
    evaluate->add_option("--scaling", eval_scaling, "w|t|unit|auto");
    evaluate->add_option("--fixed-test", eval_fixed_test, "Fixed test-set .mts path");
    evaluate->add_option("--workers", eval_workers, "Worker threads");
    evaluate->add_option("--out", eval_out, "Output CSV path (- for stdout)");

    // --- bench ---
    auto* bench = app.add_subcommand("bench", "Model-selection wall-time scaling");
    std::string bench_data, bench_grids = "1,2,5,10", bench_out;
    int bench_replicate = 1, bench_folds = 5, bench_repeats = 1, bench_workers = 1;
    double bench_proportion = 1.0;
    std::uint64_t bench_seed = 0;
    bench->add_option("--data", bench_data, "Dataset .mts path")->required();
    bench->add_option("--replicate", bench_replicate, "Row replication factor");
    bench->add_option("--grids", bench_grids, "Comma-separated m values, starting at 1");
    bench->add_option("--proportion", bench_proportion, "Training proportion (1 = all)");
    bench->add_option("--folds", bench_folds, "CV folds");
    bench->add_option("--seed", bench_seed, "Seed");
    bench->add_option("--repeats", bench_repeats, "Timing repetitions (minimum kept)");
    bench->add_option("--workers", bench_workers, "Worker threads");
    bench->add_option("--out", bench_out, "Output CSV path (- for stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (synth->parsed()) {
            rblda::MtsDataset data = rblda::synth_separable(
                static_cast<rblda::Index>(synth_d1), static_cast<rblda::Index>(synth_d2),
                synth_per_class, static_cast<int>(synth_classes), synth_gap, synth_sigma,
                synth_seed);
            rblda::save_mts(synth_out, data);
        } else if (fit->parsed()) {
            rblda::MtsDataset data = rblda::load_mts(fit_data);
            rblda::FittedModel model = rblda::fit_model(
                data, rblda::method_from_string(fit_method), fit_r1, fit_r2,
                rblda::scaling_from_string(fit_scaling), fit_q1, fit_q2);
            rblda::save_model(fit_out, model);
        } else if (crossval->parsed()) {
            rblda::MtsDataset data = rblda::load_mts(cv_data);
            const rblda::CvMethod method = cv_method == "rlda" ? rblda::CvMethod::rlda
                                                               : rblda::CvMethod::rblda;
            if (cv_method != "rlda" && cv_method != "rblda") {
                throw rblda::input_error("crossval: method must be rblda or rlda");
            }
            rblda::RegGrid grid1{cv_grid.empty() ? rblda::RegGrid::default_grid().values()
                                                 : parse_grid(cv_grid)};
            rblda::RegGrid grid2{cv_grid2.empty() ? grid1.values() : parse_grid(cv_grid2)};
            rblda::CvReport report =
                rblda::cross_validate(data, method, grid1, grid2, cv_folds, cv_seed,
                                      rblda::scaling_from_string(cv_scaling), cv_workers);
            const bool bilinear = method == rblda::CvMethod::rblda;
            write_text(cv_out, rblda::cv_csv(report, grid1, bilinear ? &grid2 : nullptr));
        } else if (evaluate->parsed()) {
            rblda::ExperimentConfig config;
            std::string fixed_test_path = eval_fixed_test;
            if (!eval_config.empty()) {
                apply_config_file(eval_config, config, fixed_test_path);
            }
            if (!eval_fixed_test.empty()) fixed_test_path = eval_fixed_test;
            if (!eval_method.empty()) config.method = rblda::method_from_string(eval_method);
            if (eval_proportion >= 0.0) config.train_proportion = eval_proportion;
            if (eval_splits >= 0) config.n_splits = eval_splits;
            if (eval_folds >= 0) config.cv_folds = eval_folds;
            if (!eval_grid.empty()) config.grid1 = parse_grid(eval_grid);
            if (!eval_grid2.empty()) config.grid2 = parse_grid(eval_grid2);
            if (eval_seed >= 0) config.seed = static_cast<std::uint64_t>(eval_seed);
            if (!eval_scaling.empty()) {
                config.scaling = rblda::scaling_policy_from_string(eval_scaling);
            }
            if (eval_workers >= 1) config.workers = eval_workers;

            rblda::MtsDataset data = rblda::load_mts(eval_data);
            std::optional<rblda::MtsDataset> fixed_test;
            if (!fixed_test_path.empty()) {
                fixed_test = rblda::load_mts(fixed_test_path);
            }
            rblda::ExperimentResult result = rblda::run_experiment(data, config, fixed_test);
            write_text(eval_out, rblda::experiment_csv(result));
        } else if (bench->parsed()) {
            rblda::MtsDataset data = rblda::load_mts(bench_data);
            rblda::BenchReport report =
                rblda::run_bench(data, parse_int_list(bench_grids), bench_replicate,
                                 bench_proportion, bench_folds, bench_seed, bench_repeats,
                                 bench_workers);
            write_text(bench_out, rblda::bench_csv(report));
        }
    } catch (const rblda::input_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const rblda::degeneracy_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const rblda::method_unavailable_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
