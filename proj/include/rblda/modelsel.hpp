#pragma once

#include "rblda/dataset.hpp"
#include "rblda/rblda.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rblda {

/// Ascending, distinct regularization candidates in (0, 1].
class RegGrid {
public:
    explicit RegGrid(std::vector<double> candidates);

    /// The thirteen-value grid {1e-6, 0.001, 0.01, 0.1, 0.2, ..., 0.9, 0.99}.
    static RegGrid default_grid();

    std::size_t size() const { return candidates_.size(); }
    double operator[](std::size_t i) const { return candidates_[i]; }
    const std::vector<double>& values() const { return candidates_; }

private:
    std::vector<double> candidates_;
};

enum class CvMethod { rblda, rlda };

/// Fold-averaged validation errors over the regularization grid(s).
struct CvReport {
    Matrix error_grid;            // m1 x m2 mean error rates
    std::vector<Matrix> per_fold; // folds entries of m1 x m2 raw errors
    Index selected_i = 0;
    Index selected_j = 0;
    int folds = 0;
    std::uint64_t seed = 0;
    BasisScaling scaling = BasisScaling::w_orthogonal;
    std::string tie_policy; // how grid ties were broken, for audit

    double selected_r1(const RegGrid& grid1) const { return grid1[static_cast<std::size_t>(selected_i)]; }
    double selected_r2(const RegGrid& grid2) const { return grid2[static_cast<std::size_t>(selected_j)]; }
};

/// Deterministic stratified fold assignment: per class, fold sizes differ
/// by at most one. Errors when a class would be absent from some training
/// fold (i.e. a singleton class).
std::vector<int> stratified_folds(const std::vector<int>& labels, int num_classes,
                                  int folds, std::uint64_t seed);

/// V-fold cross-validated grid search. Per fold the direction caches are
/// built once and shared across every candidate, so exactly two condensed
/// SVDs run per fold for rblda and one for rlda (which ignores grid2 and
/// yields an m1 x 1 grid). Validation observations are centered with the
/// training-fold mean. Fold workloads may be spread over `workers`
/// threads; results do not depend on the schedule.
CvReport cross_validate(const MtsDataset& data, CvMethod method, const RegGrid& grid1,
                        const RegGrid& grid2, int folds, std::uint64_t seed,
                        BasisScaling scaling, int workers = 1);

} // namespace rblda
