#include "rblda/modelsel.hpp"

#include "rblda/errors.hpp"
#include "rblda/features.hpp"
#include "rblda/rng.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <set>
#include <string>
#include <thread>

namespace rblda {

RegGrid::RegGrid(std::vector<double> candidates) : candidates_(std::move(candidates)) {
    if (candidates_.empty()) {
        throw input_error("RegGrid: at least one candidate required");
    }
    double prev = 0.0;
    for (double r : candidates_) {
        if (!(r > 0.0) || r > 1.0) {
            throw input_error("RegGrid: candidates must lie in (0, 1]");
        }
        if (!(r > prev)) {
            throw input_error("RegGrid: candidates must be strictly increasing");
        }
        prev = r;
    }
}

RegGrid RegGrid::default_grid() {
    return RegGrid({1e-6, 0.001, 0.01, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99});
}

std::vector<int> stratified_folds(const std::vector<int>& labels, int num_classes,
                                  int folds, std::uint64_t seed) {
    if (folds < 2) {
        throw input_error("stratified_folds: at least two folds required");
    }
    if (num_classes <= 0) {
        throw input_error("stratified_folds: class count must be positive");
    }

    std::vector<int> assignment(labels.size(), -1);
    SplitMix64 rng(seed);
    for (int k = 0; k < num_classes; ++k) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i] == k) members.push_back(i);
        }
        if (members.empty()) {
            throw input_error("stratified_folds: class " + std::to_string(k) + " is empty");
        }
        rng.shuffle(members);
        for (std::size_t j = 0; j < members.size(); ++j) {
            assignment[members[j]] = static_cast<int>(j % static_cast<std::size_t>(folds));
        }
        // Every training fold (the complement of one fold) must contain the
        // class; a class dealt into a single fold would vanish from it.
        if (members.size() < 2) {
            throw input_error("stratified_folds: class " + std::to_string(k) +
                              " has a single observation and would be absent from the "
                              "training portion of its fold");
        }
    }
    return assignment;
}

namespace {

struct FoldSplit {
    std::vector<std::size_t> train;
    std::vector<std::size_t> val;
};

FoldSplit fold_indices(const std::vector<int>& assignment, int fold) {
    FoldSplit split;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        (assignment[i] == fold ? split.val : split.train).push_back(i);
    }
    return split;
}

void check_fold(const MtsDataset& train, const MtsDataset& val, int fold) {
    std::set<int> train_classes(train.labels.begin(), train.labels.end());
    if (train_classes.size() < 2) {
        throw degeneracy_error("cross_validate: training portion of fold " +
                               std::to_string(fold) + " has a single class");
    }
    if (val.size() == 0) {
        throw input_error("cross_validate: fold " + std::to_string(fold) +
                          " has no validation observations (too many folds)");
    }
}

/// Observations in U-coordinates, centered with `mean`; for the bilinear
/// case Xhat = (u1' (X - mean)) u2, matching project() bit for bit.
std::vector<Matrix> to_u_space(const std::vector<Matrix>& obs, const Matrix& mean,
                               const Matrix& u1, const Matrix* u2) {
    std::vector<Matrix> out;
    out.reserve(obs.size());
    for (const Matrix& x : obs) {
        Matrix centered = x - mean;
        if (u2 != nullptr) {
            out.push_back((u1.transpose() * centered) * (*u2));
        } else {
            out.push_back(u1.transpose() * centered);
        }
    }
    return out;
}

/// Validation errors for one fold across the whole grid.
Matrix fold_errors(const MtsDataset& data, CvMethod method, const RegGrid& grid1,
                   const RegGrid& grid2, const std::vector<int>& assignment, int fold,
                   BasisScaling scaling) {
    const FoldSplit split = fold_indices(assignment, fold);
    MtsDataset train = subset(data, split.train);
    MtsDataset val = subset(data, split.val);
    check_fold(train, val, fold);

    const auto m1 = static_cast<Index>(grid1.size());

    if (method == CvMethod::rlda) {
        // Vector path: one direction cache of the vectorized observations.
        MtsDataset train_vec = as_vector_dataset(train);
        const Matrix mean_vec = class_stats(train_vec).global_mean;
        DirectionCache cache = make_direction_cache(train_vec, 1);
        MtsDataset val_vec = as_vector_dataset(val);
        std::vector<Matrix> train_u =
            to_u_space(train_vec.observations, mean_vec, cache.u_basis, nullptr);
        std::vector<Matrix> val_u =
            to_u_space(val_vec.observations, mean_vec, cache.u_basis, nullptr);

        Matrix errors(m1, 1);
        for (Index i = 0; i < m1; ++i) {
            DirectionBasis dir = rblda_direction(cache, grid1[static_cast<std::size_t>(i)], scaling);
            FeatureBlock ftrain;
            ftrain.labels = train.labels;
            for (const Matrix& x : train_u) ftrain.features.push_back(dir.basis.transpose() * x);
            FeatureBlock fval;
            fval.labels = val.labels;
            for (const Matrix& x : val_u) fval.features.push_back(dir.basis.transpose() * x);
            errors(i, 0) = nn1_error(ftrain, fval);
        }
        return errors;
    }

    const auto m2 = static_cast<Index>(grid2.size());
    const Matrix mean = class_stats(train).global_mean;
    auto caches = rblda_precompute(train);

    std::vector<Matrix> train_u =
        to_u_space(train.observations, mean, caches.first.u_basis, &caches.second.u_basis);
    std::vector<Matrix> val_u =
        to_u_space(val.observations, mean, caches.first.u_basis, &caches.second.u_basis);

    std::vector<DirectionBasis> dir1(static_cast<std::size_t>(m1));
    for (Index i = 0; i < m1; ++i) {
        dir1[static_cast<std::size_t>(i)] =
            rblda_direction(caches.first, grid1[static_cast<std::size_t>(i)], scaling);
    }
    std::vector<DirectionBasis> dir2(static_cast<std::size_t>(m2));
    for (Index j = 0; j < m2; ++j) {
        dir2[static_cast<std::size_t>(j)] =
            rblda_direction(caches.second, grid2[static_cast<std::size_t>(j)], scaling);
    }

    Matrix errors(m1, m2);
    std::vector<Matrix> ztrain(train_u.size());
    std::vector<Matrix> zval(val_u.size());
    for (Index i = 0; i < m1; ++i) {
        // Hoist the left product; the per-cell features (v1' Xhat) v2 are
        // unchanged by reusing it across j.
        const Matrix& v1 = dir1[static_cast<std::size_t>(i)].basis;
        for (std::size_t a = 0; a < train_u.size(); ++a) ztrain[a] = v1.transpose() * train_u[a];
        for (std::size_t a = 0; a < val_u.size(); ++a) zval[a] = v1.transpose() * val_u[a];
        for (Index j = 0; j < m2; ++j) {
            const Matrix& v2 = dir2[static_cast<std::size_t>(j)].basis;
            FeatureBlock ftrain;
            ftrain.labels = train.labels;
            ftrain.features.reserve(ztrain.size());
            for (const Matrix& z : ztrain) ftrain.features.push_back(z * v2);
            FeatureBlock fval;
            fval.labels = val.labels;
            fval.features.reserve(zval.size());
            for (const Matrix& z : zval) fval.features.push_back(z * v2);
            errors(i, j) = nn1_error(ftrain, fval);
        }
    }
    return errors;
}

} // namespace

CvReport cross_validate(const MtsDataset& data, CvMethod method, const RegGrid& grid1,
                        const RegGrid& grid2, int folds, std::uint64_t seed,
                        BasisScaling scaling, int workers) {
    if (workers < 1) {
        throw input_error("cross_validate: worker count must be >= 1");
    }
    const std::vector<int> assignment =
        stratified_folds(data.labels, data.num_classes, folds, seed);

    const auto m1 = static_cast<Index>(grid1.size());
    const auto m2 = method == CvMethod::rlda ? Index{1} : static_cast<Index>(grid2.size());

    CvReport report;
    report.folds = folds;
    report.seed = seed;
    report.scaling = scaling;
    report.tie_policy = "lexicographic smallest (i, j)";
    report.per_fold.assign(static_cast<std::size_t>(folds), Matrix());

    if (workers == 1) {
        for (int v = 0; v < folds; ++v) {
            report.per_fold[static_cast<std::size_t>(v)] =
                fold_errors(data, method, grid1, grid2, assignment, v, scaling);
        }
    } else {
        std::atomic<int> next{0};
        std::exception_ptr first_error;
        std::mutex error_mutex;
        auto worker = [&]() {
            for (;;) {
                const int v = next.fetch_add(1);
                if (v >= folds) return;
                try {
                    report.per_fold[static_cast<std::size_t>(v)] =
                        fold_errors(data, method, grid1, grid2, assignment, v, scaling);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        };
        std::vector<std::thread> pool;
        const int count = std::min(workers, folds);
        pool.reserve(static_cast<std::size_t>(count));
        for (int t = 0; t < count; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    report.error_grid = Matrix::Zero(m1, m2);
    for (const Matrix& fold : report.per_fold) {
        report.error_grid += fold;
    }
    report.error_grid /= static_cast<double>(folds);

    double best = report.error_grid(0, 0);
    for (Index i = 0; i < m1; ++i) {
        for (Index j = 0; j < m2; ++j) {
            if (report.error_grid(i, j) < best) {
                best = report.error_grid(i, j);
                report.selected_i = i;
                report.selected_j = j;
            }
        }
    }
    return report;
}

} // namespace rblda
