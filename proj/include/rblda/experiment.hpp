#pragma once

#include "rblda/dataio.hpp"
#include "rblda/features.hpp"
#include "rblda/modelsel.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace rblda {

enum class Method { rblda, rlda, blda, pblda, bpca };

const char* to_string(Method m);
Method method_from_string(const std::string& s);

/// Which basis scalings the evaluation tries; better_of_w_unit runs both
/// the w-scaled and the column-normalized basis and reports the winner.
enum class ScalingPolicy { w, t, unit, better_of_w_unit };

const char* to_string(ScalingPolicy p);
ScalingPolicy scaling_policy_from_string(const std::string& s);

struct ExperimentConfig {
    Method method = Method::rblda;
    double train_proportion = 0.5;
    int n_splits = 10;
    int cv_folds = 5;
    std::vector<double> grid1 = RegGrid::default_grid().values();
    std::vector<double> grid2 = RegGrid::default_grid().values();
    std::uint64_t seed = 0;
    ScalingPolicy scaling = ScalingPolicy::better_of_w_unit;
    int workers = 1;
    Index bpca_q1 = 0; // 0 = full rank
    Index bpca_q2 = 0;
};

/// A complete fitted model of any method, ready for projection.
struct FittedModel {
    Method method = Method::rblda;
    bool is_vector = false;
    RldaBasis vector_basis; // when is_vector (rlda)
    Matrix vector_mean;     // training mean of the vectorized observations
    RbldaModel bilinear;    // otherwise (bpca/blda/pblda wrapped with r = 1)
};

/// Fit `method` on the training data (centering internally). For rblda the
/// U-space implementation is used; bpca dimensions of 0 mean full rank.
FittedModel fit_model(const MtsDataset& train, Method method, double r1, double r2,
                      BasisScaling scaling, Index bpca_q1 = 0, Index bpca_q2 = 0);

/// Project observations through a fitted model; data is centered here with
/// the model's stored training mean.
FeatureBlock project_model(const FittedModel& model, const MtsDataset& data);

/// nn1 errors over every truncation (q1', q2') of the feature blocks;
/// entry (i, j) is the error using the leading (i+1) x (j+1) features.
Matrix sweep_errors(const FeatureBlock& train, const FeatureBlock& test);

struct SplitOutcome {
    double error_at_best = std::numeric_limits<double>::quiet_NaN();
    double r1 = std::numeric_limits<double>::quiet_NaN();
    double r2 = std::numeric_limits<double>::quiet_NaN();
};

struct ExperimentResult {
    Method method = Method::rblda;
    double train_proportion = 0.0;
    bool available = true;
    std::string unavailable_reason;
    BasisScaling best_scaling = BasisScaling::w_orthogonal;
    Index best_q1 = 0;
    Index best_q2 = 0;
    double mean_error = std::numeric_limits<double>::quiet_NaN();
    double std_error = std::numeric_limits<double>::quiet_NaN();
    std::vector<SplitOutcome> splits;
};

/// The full evaluation protocol: per random split, select regularization
/// by cross-validation on the training portion, refit on the whole
/// training split, sweep every reduced dimensionality on the held-out
/// portion, and report the dimensions minimizing the split-averaged error.
/// A fixed test set, when given, replaces the held-out portions.
ExperimentResult run_experiment(const MtsDataset& data, const ExperimentConfig& config,
                                const std::optional<MtsDataset>& fixed_test = std::nullopt);

/// Byte-stable CSV: one row per split plus a summary row; unavailable
/// methods emit "--" in the error column.
std::string experiment_csv(const ExperimentResult& result);

struct BenchReport {
    std::vector<int> grid_sizes; // m values, ascending, starting at 1
    std::vector<double> seconds; // wall time of an m x m cross-validation
    std::vector<double> ratios;  // seconds relative to the m = 1 entry
};

/// Wall-time scaling of the model-selection algorithm over grid size. The
/// dataset is replicated `replicate` times along the rows, a training
/// portion is drawn once, and each m x m grid is cross-validated `repeats`
/// times (the minimum time is kept).
BenchReport run_bench(const MtsDataset& data, const std::vector<int>& grid_sizes,
                      int replicate, double train_proportion, int folds,
                      std::uint64_t seed, int repeats = 1, int workers = 1);

std::string bench_csv(const BenchReport& report);

/// Cross-validation report as CSV (grid values, per-fold and mean errors,
/// selected candidate).
std::string cv_csv(const CvReport& report, const RegGrid& grid1, const RegGrid* grid2);

} // namespace rblda
