#include "rblda/experiment.hpp"

#include "rblda/errors.hpp"
#include "rblda/scatter.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace rblda {

const char* to_string(Method m) {
    switch (m) {
        case Method::rblda: return "rblda";
        case Method::rlda: return "rlda";
        case Method::blda: return "blda";
        case Method::pblda: return "pblda";
        case Method::bpca: return "bpca";
    }
    return "?";
}

Method method_from_string(const std::string& s) {
    if (s == "rblda") return Method::rblda;
    if (s == "rlda") return Method::rlda;
    if (s == "blda") return Method::blda;
    if (s == "pblda") return Method::pblda;
    if (s == "bpca") return Method::bpca;
    throw input_error("unknown method \"" + s + "\"");
}

const char* to_string(ScalingPolicy p) {
    switch (p) {
        case ScalingPolicy::w: return "w";
        case ScalingPolicy::t: return "t";
        case ScalingPolicy::unit: return "unit";
        case ScalingPolicy::better_of_w_unit: return "auto";
    }
    return "?";
}

ScalingPolicy scaling_policy_from_string(const std::string& s) {
    if (s == "w") return ScalingPolicy::w;
    if (s == "t") return ScalingPolicy::t;
    if (s == "unit") return ScalingPolicy::unit;
    if (s == "auto" || s == "better") return ScalingPolicy::better_of_w_unit;
    throw input_error("unknown scaling policy \"" + s + "\" (expected w, t, unit or auto)");
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_or_empty(double v) { return std::isnan(v) ? std::string() : fmt(v); }

FittedModel unit_variant(const FittedModel& base) {
    FittedModel out = base;
    if (out.is_vector) {
        out.vector_basis = unit_normalized(base.vector_basis);
    } else {
        out.bilinear.basis = unit_normalized(base.bilinear.basis);
    }
    return out;
}

} // namespace

FittedModel fit_model(const MtsDataset& train, Method method, double r1, double r2,
                      BasisScaling scaling, Index bpca_q1, Index bpca_q2) {
    FittedModel model;
    model.method = method;
    switch (method) {
        case Method::rblda: {
            model.bilinear = rblda_fit_v2(train, r1, r2, scaling);
            break;
        }
        case Method::rlda: {
            model.is_vector = true;
            const Matrix x = vectorize(train);
            switch (scaling) {
                case BasisScaling::t_orthogonal:
                    model.vector_basis = rlda_direct(x, train.labels, train.num_classes, r1);
                    break;
                case BasisScaling::w_orthogonal:
                    model.vector_basis = rlda_fast(x, train.labels, train.num_classes, r1);
                    break;
                case BasisScaling::unit_column:
                    model.vector_basis =
                        unit_normalized(rlda_fast(x, train.labels, train.num_classes, r1));
                    break;
            }
            model.vector_mean = class_stats(train).global_mean;
            break;
        }
        case Method::blda:
        case Method::pblda: {
            if (scaling == BasisScaling::t_orthogonal) {
                throw input_error("blda/pblda have no t-orthogonal variant");
            }
            BilinearBasis basis = blda_fit(
                train, method == Method::blda ? BldaMode::strict : BldaMode::pseudo);
            if (scaling == BasisScaling::unit_column) basis = unit_normalized(basis);
            model.bilinear.basis = std::move(basis);
            model.bilinear.mean = class_stats(train).global_mean;
            break;
        }
        case Method::bpca: {
            model.bilinear.basis = bpca_fit(train, bpca_q1, bpca_q2);
            model.bilinear.mean = class_stats(train).global_mean;
            break;
        }
    }
    return model;
}

FeatureBlock project_model(const FittedModel& model, const MtsDataset& data) {
    if (model.is_vector) {
        MtsDataset centered = data;
        for (Matrix& x : centered.observations) x -= model.vector_mean;
        return project(model.vector_basis, centered);
    }
    MtsDataset centered = data;
    for (Matrix& x : centered.observations) x -= model.bilinear.mean;
    return project(model.bilinear, centered);
}

Matrix sweep_errors(const FeatureBlock& train, const FeatureBlock& test) {
    const Index q1 = train.q1();
    const Index q2 = train.q2();
    if (q1 == 0 || q2 == 0) {
        throw input_error("sweep_errors: empty feature space");
    }
    Matrix errors(q1, q2);
    for (Index i = 1; i <= q1; ++i) {
        for (Index j = 1; j <= q2; ++j) {
            errors(i - 1, j - 1) = nn1_error(truncate(train, i, j), truncate(test, i, j));
        }
    }
    return errors;
}

ExperimentResult run_experiment(const MtsDataset& data, const ExperimentConfig& config,
                                const std::optional<MtsDataset>& fixed_test) {
    data.validate();
    if (config.n_splits < 1) {
        throw input_error("run_experiment: at least one split required");
    }
    if (config.workers < 1) {
        throw input_error("run_experiment: worker count must be >= 1");
    }

    ExperimentResult result;
    result.method = config.method;
    result.train_proportion = config.train_proportion;

    const bool regularized = config.method == Method::rblda || config.method == Method::rlda;
    const BasisScaling base_scaling = config.scaling == ScalingPolicy::t
                                          ? BasisScaling::t_orthogonal
                                          : BasisScaling::w_orthogonal;
    std::vector<BasisScaling> candidates;
    switch (config.scaling) {
        case ScalingPolicy::w: candidates = {BasisScaling::w_orthogonal}; break;
        case ScalingPolicy::t: candidates = {BasisScaling::t_orthogonal}; break;
        case ScalingPolicy::unit: candidates = {BasisScaling::unit_column}; break;
        case ScalingPolicy::better_of_w_unit:
            candidates = {BasisScaling::w_orthogonal, BasisScaling::unit_column};
            break;
    }

    const RegGrid grid1{config.grid1};
    const RegGrid grid2{config.grid2};

    // Per candidate scaling, each split's full dimension-sweep table.
    std::vector<std::vector<Matrix>> tables(candidates.size());
    std::vector<SplitOutcome> outcomes;

    for (int s = 0; s < config.n_splits; ++s) {
        const std::uint64_t split_seed = config.seed + static_cast<std::uint64_t>(s);
        auto [train, holdout] = random_split(data, {config.train_proportion, split_seed});
        const MtsDataset& test = fixed_test ? *fixed_test : holdout;
        if (test.size() == 0) {
            throw input_error("run_experiment: no test observations; lower the training "
                              "proportion or provide a fixed test set");
        }

        SplitOutcome outcome;
        if (regularized) {
            const CvMethod cv_method =
                config.method == Method::rblda ? CvMethod::rblda : CvMethod::rlda;
            const BasisScaling cv_scaling = base_scaling;
            CvReport cv = cross_validate(train, cv_method, grid1, grid2, config.cv_folds,
                                         split_seed, cv_scaling, config.workers);
            outcome.r1 = cv.selected_r1(grid1);
            if (config.method == Method::rblda) outcome.r2 = cv.selected_r2(grid2);
        }

        FittedModel base;
        try {
            base = fit_model(train, config.method, std::isnan(outcome.r1) ? 1.0 : outcome.r1,
                             std::isnan(outcome.r2) ? 1.0 : outcome.r2, base_scaling,
                             config.bpca_q1, config.bpca_q2);
        } catch (const method_unavailable_error& e) {
            result.available = false;
            result.unavailable_reason = e.what();
            result.splits.clear();
            return result;
        }

        for (std::size_t c = 0; c < candidates.size(); ++c) {
            FittedModel variant =
                candidates[c] == BasisScaling::unit_column ? unit_variant(base) : base;
            FeatureBlock ftrain = project_model(variant, train);
            FeatureBlock ftest = project_model(variant, test);
            tables[c].push_back(sweep_errors(ftrain, ftest));
        }
        outcomes.push_back(outcome);
    }

    // Common sweep shape across splits (ranks can differ slightly), then
    // the (scaling, q1, q2) cell with the lowest split-averaged error;
    // ties go to the earlier scaling candidate and the smaller dims.
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        Index q1 = tables[c].front().rows();
        Index q2 = tables[c].front().cols();
        for (const Matrix& t : tables[c]) {
            q1 = std::min(q1, t.rows());
            q2 = std::min(q2, t.cols());
        }
        Matrix mean = Matrix::Zero(q1, q2);
        for (const Matrix& t : tables[c]) mean += t.topLeftCorner(q1, q2);
        mean /= static_cast<double>(config.n_splits);
        for (Index i = 0; i < q1; ++i) {
            for (Index j = 0; j < q2; ++j) {
                if (mean(i, j) < best) {
                    best = mean(i, j);
                    result.best_scaling = candidates[c];
                    result.best_q1 = i + 1;
                    result.best_q2 = j + 1;
                }
            }
        }
    }

    std::size_t winner = 0;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        if (candidates[c] == result.best_scaling) winner = c;
    }
    double sum = 0.0;
    for (int s = 0; s < config.n_splits; ++s) {
        outcomes[static_cast<std::size_t>(s)].error_at_best =
            tables[winner][static_cast<std::size_t>(s)](result.best_q1 - 1, result.best_q2 - 1);
        sum += outcomes[static_cast<std::size_t>(s)].error_at_best;
    }
    result.mean_error = sum / static_cast<double>(config.n_splits);
    double ss = 0.0;
    for (const SplitOutcome& o : outcomes) {
        ss += (o.error_at_best - result.mean_error) * (o.error_at_best - result.mean_error);
    }
    result.std_error = config.n_splits > 1
                           ? std::sqrt(ss / static_cast<double>(config.n_splits - 1))
                           : 0.0;
    result.splits = std::move(outcomes);
    return result;
}

std::string experiment_csv(const ExperimentResult& result) {
    std::ostringstream out;
    out << "row,method,p,split,scaling,q1,q2,error,std,r1,r2,status\n";
    if (!result.available) {
        out << "summary," << to_string(result.method) << ',' << fmt(result.train_proportion)
            << ",,,,,--,,,,unavailable\n";
        return out.str();
    }
    const char* scaling = to_string(result.best_scaling);
    for (std::size_t s = 0; s < result.splits.size(); ++s) {
        const SplitOutcome& o = result.splits[s];
        out << "split," << to_string(result.method) << ',' << fmt(result.train_proportion)
            << ',' << s << ',' << scaling << ',' << result.best_q1 << ',' << result.best_q2
            << ',' << fmt(o.error_at_best) << ",," << fmt_or_empty(o.r1) << ','
            << fmt_or_empty(o.r2) << ",ok\n";
    }
    out << "summary," << to_string(result.method) << ',' << fmt(result.train_proportion)
        << ",," << scaling << ',' << result.best_q1 << ',' << result.best_q2 << ','
        << fmt(result.mean_error) << ',' << fmt(result.std_error) << ",,,ok\n";
    return out.str();
}

BenchReport run_bench(const MtsDataset& data, const std::vector<int>& grid_sizes,
                      int replicate, double train_proportion, int folds,
                      std::uint64_t seed, int repeats, int workers) {
    if (grid_sizes.empty() || grid_sizes.front() != 1) {
        throw input_error("run_bench: grid sizes must start at 1 (ratios are relative to "
                          "the single-candidate run)");
    }
    for (std::size_t i = 1; i < grid_sizes.size(); ++i) {
        if (grid_sizes[i] <= grid_sizes[i - 1]) {
            throw input_error("run_bench: grid sizes must be strictly increasing");
        }
    }
    if (repeats < 1) {
        throw input_error("run_bench: repeats must be >= 1");
    }

    MtsDataset big = replicate_rows(data, replicate);
    MtsDataset train = train_proportion < 1.0
                           ? random_split(big, {train_proportion, seed}).first
                           : std::move(big);

    std::vector<RegGrid> grids;
    grids.reserve(grid_sizes.size());
    for (int m : grid_sizes) {
        std::vector<double> values(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) {
            values[static_cast<std::size_t>(i)] =
                static_cast<double>(i + 1) / static_cast<double>(m + 1);
        }
        grids.emplace_back(values);
    }

    auto timed_run = [&](const RegGrid& grid) {
        const auto start = std::chrono::steady_clock::now();
        CvReport cv = cross_validate(train, CvMethod::rblda, grid, grid, folds, seed,
                                     BasisScaling::w_orthogonal, workers);
        const auto stop = std::chrono::steady_clock::now();
        (void)cv;
        return std::chrono::duration<double>(stop - start).count();
    };

    // One untimed pass warms allocators and caches; timing rounds are then
    // interleaved across grid sizes so load bursts hit every size alike.
    (void)timed_run(grids.front());

    BenchReport report;
    report.grid_sizes = grid_sizes;
    report.seconds.assign(grid_sizes.size(), std::numeric_limits<double>::infinity());
    for (int rep = 0; rep < repeats; ++rep) {
        for (std::size_t g = 0; g < grids.size(); ++g) {
            report.seconds[g] = std::min(report.seconds[g], timed_run(grids[g]));
        }
    }
    report.ratios.reserve(report.seconds.size());
    for (double s : report.seconds) report.ratios.push_back(s / report.seconds.front());
    return report;
}

std::string bench_csv(const BenchReport& report) {
    std::ostringstream out;
    out << "m,cells,seconds,ratio\n";
    for (std::size_t i = 0; i < report.grid_sizes.size(); ++i) {
        char sec[40];
        std::snprintf(sec, sizeof(sec), "%.6f", report.seconds[i]);
        char ratio[40];
        std::snprintf(ratio, sizeof(ratio), "%.3f", report.ratios[i]);
        out << report.grid_sizes[i] << ',' << report.grid_sizes[i] * report.grid_sizes[i]
            << ',' << sec << ',' << ratio << '\n';
    }
    return out.str();
}

std::string cv_csv(const CvReport& report, const RegGrid& grid1, const RegGrid* grid2) {
    std::ostringstream out;
    out << "i,j,r1,r2,mean_error,selected";
    for (int v = 0; v < report.folds; ++v) out << ",fold" << v;
    out << '\n';
    for (Index i = 0; i < report.error_grid.rows(); ++i) {
        for (Index j = 0; j < report.error_grid.cols(); ++j) {
            out << i << ',' << j << ',' << fmt(grid1[static_cast<std::size_t>(i)]) << ',';
            if (grid2 != nullptr) out << fmt((*grid2)[static_cast<std::size_t>(j)]);
            out << ',' << fmt(report.error_grid(i, j)) << ','
                << (i == report.selected_i && j == report.selected_j ? 1 : 0);
            for (int v = 0; v < report.folds; ++v) {
                out << ',' << fmt(report.per_fold[static_cast<std::size_t>(v)](i, j));
            }
            out << '\n';
        }
    }
    return out.str();
}

} // namespace rblda
