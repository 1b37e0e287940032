#include "rblda/dataset.hpp"

#include "rblda/errors.hpp"

#include <string>

namespace rblda {

std::vector<std::size_t> MtsDataset::class_counts() const {
    std::vector<std::size_t> counts(static_cast<std::size_t>(num_classes), 0);
    for (int lab : labels) {
        if (lab >= 0 && lab < num_classes) ++counts[static_cast<std::size_t>(lab)];
    }
    return counts;
}

void MtsDataset::validate() const {
    if (observations.size() != labels.size()) {
        throw input_error("dataset: observation and label counts differ");
    }
    if (num_classes <= 0) {
        throw input_error("dataset: class count must be positive");
    }
    if (observations.empty()) {
        throw input_error("dataset: no observations");
    }
    const Index r = observations.front().rows();
    const Index c = observations.front().cols();
    for (std::size_t i = 0; i < observations.size(); ++i) {
        if (observations[i].rows() != r || observations[i].cols() != c) {
            throw input_error("dataset: observation " + std::to_string(i) +
                              " has inconsistent shape");
        }
        if (!observations[i].allFinite()) {
            throw input_error("dataset: observation " + std::to_string(i) +
                              " has non-finite entries");
        }
        if (labels[i] < 0 || labels[i] >= num_classes) {
            throw input_error("dataset: label " + std::to_string(labels[i]) +
                              " of observation " + std::to_string(i) + " out of range");
        }
    }
    const auto counts = class_counts();
    for (std::size_t k = 0; k < counts.size(); ++k) {
        if (counts[k] == 0) {
            throw input_error("dataset: class " + std::to_string(k) + " is empty");
        }
    }
}

ClassStats class_stats(const MtsDataset& data) {
    if (data.observations.empty()) {
        throw input_error("class_stats: empty dataset");
    }
    const Index r = data.d1();
    const Index c = data.d2();
    ClassStats stats;
    stats.global_mean = Matrix::Zero(r, c);
    stats.class_means.assign(static_cast<std::size_t>(data.num_classes), Matrix::Zero(r, c));
    stats.counts.assign(static_cast<std::size_t>(data.num_classes), 0);

    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto k = static_cast<std::size_t>(data.labels[i]);
        stats.class_means[k] += data.observations[i];
        ++stats.counts[k];
        stats.global_mean += data.observations[i];
    }
    stats.global_mean /= static_cast<double>(data.size());
    for (std::size_t k = 0; k < stats.counts.size(); ++k) {
        if (stats.counts[k] == 0) {
            throw input_error("class_stats: class " + std::to_string(k) +
                              " has no observations");
        }
        stats.class_means[k] /= static_cast<double>(stats.counts[k]);
    }
    return stats;
}

std::pair<MtsDataset, Matrix> center_dataset(const MtsDataset& data) {
    if (data.observations.empty()) {
        throw input_error("center_dataset: empty dataset");
    }
    Matrix mean = Matrix::Zero(data.d1(), data.d2());
    for (const Matrix& x : data.observations) mean += x;
    mean /= static_cast<double>(data.size());

    MtsDataset centered = data;
    for (Matrix& x : centered.observations) x -= mean;
    return {std::move(centered), std::move(mean)};
}

MtsDataset subset(const MtsDataset& data, const std::vector<std::size_t>& indices) {
    MtsDataset out;
    out.num_classes = data.num_classes;
    out.observations.reserve(indices.size());
    out.labels.reserve(indices.size());
    for (std::size_t i : indices) {
        out.observations.push_back(data.observations[i]);
        out.labels.push_back(data.labels[i]);
    }
    return out;
}

Matrix vectorize(const MtsDataset& data) {
    const Index d = data.d1() * data.d2();
    Matrix out(d, static_cast<Index>(data.size()));
    for (std::size_t i = 0; i < data.size(); ++i) {
        out.col(static_cast<Index>(i)) =
            Eigen::Map<const Vector>(data.observations[i].data(), d);
    }
    return out;
}

MtsDataset as_vector_dataset(const MtsDataset& data) {
    const Index d = data.d1() * data.d2();
    MtsDataset out;
    out.num_classes = data.num_classes;
    out.labels = data.labels;
    out.observations.reserve(data.size());
    for (const Matrix& x : data.observations) {
        out.observations.push_back(Eigen::Map<const Vector>(x.data(), d));
    }
    return out;
}

} // namespace rblda
