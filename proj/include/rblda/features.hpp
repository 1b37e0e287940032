#pragma once

#include "rblda/dataset.hpp"
#include "rblda/rblda.hpp"
#include "rblda/rlda.hpp"

#include <vector>

namespace rblda {

/// Projected observations: n matrices of a common shape q1 x q2 (vector
/// methods produce q x 1) with their class labels.
struct FeatureBlock {
    std::vector<Matrix> features;
    std::vector<int> labels;

    std::size_t size() const { return features.size(); }
    Index q1() const { return features.empty() ? 0 : features.front().rows(); }
    Index q2() const { return features.empty() ? 0 : features.front().cols(); }
};

/// Y_i = (v1' X_i) v2 in exactly that association order (the
/// cross-validation fast path hoists the left product and must reproduce
/// these values bit for bit). The data must already be centered with the
/// training mean.
FeatureBlock project(const Matrix& v1, const Matrix& v2, const MtsDataset& centered);

/// Projection through a fitted model; U-space bases are applied to the
/// U-projected data, never mapped back to the original space.
FeatureBlock project(const RbldaModel& model, const MtsDataset& centered);
FeatureBlock project(const BilinearBasis& basis, const MtsDataset& centered);

/// Vector-method projection y_i = V' vec(X_i), producing q x 1 features.
FeatureBlock project(const RldaBasis& basis, const MtsDataset& centered);

/// Keep the upper-left q1' x q2' submatrix of every feature (directions
/// are eigenvalue-ordered, so leading dimensions carry the signal).
FeatureBlock truncate(const FeatureBlock& block, Index q1, Index q2);

/// Fraction of test items whose nearest training item under Frobenius
/// distance has a different label; distance ties go to the smallest
/// training index.
double nn1_error(const FeatureBlock& train, const FeatureBlock& test);

} // namespace rblda
