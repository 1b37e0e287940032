#include "rblda/features.hpp"

#include "rblda/errors.hpp"

#include <string>

namespace rblda {

FeatureBlock project(const Matrix& v1, const Matrix& v2, const MtsDataset& centered) {
    if (centered.d1() != v1.rows() || centered.d2() != v2.rows()) {
        throw input_error("project: basis of size (" + std::to_string(v1.rows()) + ", " +
                          std::to_string(v2.rows()) + ") does not match observations of size (" +
                          std::to_string(centered.d1()) + ", " + std::to_string(centered.d2()) +
                          ")");
    }
    FeatureBlock out;
    out.labels = centered.labels;
    out.features.reserve(centered.size());
    for (const Matrix& x : centered.observations) {
        out.features.push_back((v1.transpose() * x) * v2);
    }
    return out;
}

FeatureBlock project(const RbldaModel& model, const MtsDataset& centered) {
    if (!model.in_u_space) {
        return project(model.basis.v1, model.basis.v2, centered);
    }
    if (centered.d1() != model.u1.rows() || centered.d2() != model.u2.rows()) {
        throw input_error("project: U maps do not match the observation shape");
    }
    MtsDataset in_u;
    in_u.num_classes = centered.num_classes;
    in_u.labels = centered.labels;
    in_u.observations.reserve(centered.size());
    for (const Matrix& x : centered.observations) {
        in_u.observations.push_back((model.u1.transpose() * x) * model.u2);
    }
    return project(model.basis.v1, model.basis.v2, in_u);
}

FeatureBlock project(const BilinearBasis& basis, const MtsDataset& centered) {
    return project(basis.v1, basis.v2, centered);
}

FeatureBlock project(const RldaBasis& basis, const MtsDataset& centered) {
    const Index d = centered.d1() * centered.d2();
    if (basis.basis.rows() != d) {
        throw input_error("project: vector basis of length " +
                          std::to_string(basis.basis.rows()) +
                          " does not match vectorized observations of length " +
                          std::to_string(d));
    }
    FeatureBlock out;
    out.labels = centered.labels;
    out.features.reserve(centered.size());
    for (const Matrix& x : centered.observations) {
        Eigen::Map<const Vector> flat(x.data(), d);
        out.features.push_back(basis.basis.transpose() * flat);
    }
    return out;
}

FeatureBlock truncate(const FeatureBlock& block, Index q1, Index q2) {
    if (q1 < 1 || q2 < 1 || q1 > block.q1() || q2 > block.q2()) {
        throw input_error("truncate: dimensions (" + std::to_string(q1) + ", " +
                          std::to_string(q2) + ") out of range for features of size (" +
                          std::to_string(block.q1()) + ", " + std::to_string(block.q2()) + ")");
    }
    FeatureBlock out;
    out.labels = block.labels;
    out.features.reserve(block.size());
    for (const Matrix& y : block.features) {
        out.features.push_back(y.topLeftCorner(q1, q2));
    }
    return out;
}

double nn1_error(const FeatureBlock& train, const FeatureBlock& test) {
    if (train.features.empty()) {
        throw input_error("nn1_error: empty training set");
    }
    if (!test.features.empty() &&
        (train.q1() != test.q1() || train.q2() != test.q2())) {
        throw input_error("nn1_error: train and test feature shapes differ");
    }

    std::size_t wrong = 0;
    for (std::size_t i = 0; i < test.size(); ++i) {
        double best = (test.features[i] - train.features[0]).squaredNorm();
        std::size_t best_idx = 0;
        for (std::size_t j = 1; j < train.size(); ++j) {
            const double dist = (test.features[i] - train.features[j]).squaredNorm();
            if (dist < best) {
                best = dist;
                best_idx = j;
            }
        }
        if (train.labels[best_idx] != test.labels[i]) ++wrong;
    }
    return test.features.empty()
               ? 0.0
               : static_cast<double>(wrong) / static_cast<double>(test.size());
}

} // namespace rblda
