#pragma once

#include "rblda/matalg.hpp"

#include <utility>
#include <vector>

namespace rblda {

/// Labeled matrix-valued observations of a common size d1 x d2 with class
/// indices in [0, num_classes).
struct MtsDataset {
    std::vector<Matrix> observations;
    std::vector<int> labels;
    int num_classes = 0;

    std::size_t size() const { return observations.size(); }
    Index d1() const { return observations.empty() ? 0 : observations.front().rows(); }
    Index d2() const { return observations.empty() ? 0 : observations.front().cols(); }

    std::vector<std::size_t> class_counts() const;

    /// Enforce the container invariants: uniform shape, labels in range,
    /// every class non-empty, finite entries. Throws input_error.
    void validate() const;
};

/// Global and per-class sample means.
struct ClassStats {
    Matrix global_mean;              // d1 x d2
    std::vector<Matrix> class_means; // num_classes entries, d1 x d2
    std::vector<std::size_t> counts; // n_k per class
};

/// Means of a dataset whose classes are all non-empty.
ClassStats class_stats(const MtsDataset& data);

/// Subtract the global mean from every observation; the mean is returned
/// for application to held-out data. Requires n >= 1.
std::pair<MtsDataset, Matrix> center_dataset(const MtsDataset& data);

/// Observations at `indices` with the parent's class count. Does not
/// require every class to remain present (validation folds may lack one).
MtsDataset subset(const MtsDataset& data, const std::vector<std::size_t>& indices);

/// Column-stacked observations as vectors: result is (d1*d2) x n, column i
/// holding vec(X_i) in column-major order.
Matrix vectorize(const MtsDataset& data);

/// The same dataset with every observation reshaped to a (d1*d2) x 1
/// matrix (column-major vec), for running vector methods through the
/// matrix machinery.
MtsDataset as_vector_dataset(const MtsDataset& data);

} // namespace rblda
