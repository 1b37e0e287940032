#include "rblda/scatter.hpp"

#include "rblda/errors.hpp"

#include <cmath>
#include <string>

namespace rblda {

std::tuple<Matrix, Matrix, Matrix> vector_scatters(const Matrix& x,
                                                   const std::vector<int>& labels,
                                                   int num_classes) {
    const Index d = x.rows();
    const Index n = x.cols();
    if (n == 0 || static_cast<std::size_t>(n) != labels.size()) {
        throw input_error("vector_scatters: label count must match observation count");
    }
    if (num_classes <= 0) {
        throw input_error("vector_scatters: class count must be positive");
    }

    std::vector<std::size_t> counts(static_cast<std::size_t>(num_classes), 0);
    Matrix class_means = Matrix::Zero(d, num_classes);
    Vector mean = Vector::Zero(d);
    for (Index i = 0; i < n; ++i) {
        const int k = labels[static_cast<std::size_t>(i)];
        if (k < 0 || k >= num_classes) {
            throw input_error("vector_scatters: label out of range");
        }
        class_means.col(k) += x.col(i);
        ++counts[static_cast<std::size_t>(k)];
        mean += x.col(i);
    }
    mean /= static_cast<double>(n);
    for (int k = 0; k < num_classes; ++k) {
        if (counts[static_cast<std::size_t>(k)] == 0) {
            throw input_error("vector_scatters: class " + std::to_string(k) + " is empty");
        }
        class_means.col(k) /= static_cast<double>(counts[static_cast<std::size_t>(k)]);
    }

    const double inv_n = 1.0 / static_cast<double>(n);
    Matrix sb = Matrix::Zero(d, d);
    for (int k = 0; k < num_classes; ++k) {
        Vector dk = class_means.col(k) - mean;
        sb.noalias() += (static_cast<double>(counts[static_cast<std::size_t>(k)]) * inv_n) *
                        (dk * dk.transpose());
    }
    Matrix sw = Matrix::Zero(d, d);
    Matrix st = Matrix::Zero(d, d);
    for (Index i = 0; i < n; ++i) {
        const int k = labels[static_cast<std::size_t>(i)];
        Vector dw = x.col(i) - class_means.col(k);
        Vector dt = x.col(i) - mean;
        sw.noalias() += inv_n * (dw * dw.transpose());
        st.noalias() += inv_n * (dt * dt.transpose());
    }
    return {std::move(sb), std::move(sw), std::move(st)};
}

BilinearScatter bilinear_scatters(const MtsDataset& data) {
    const ClassStats stats = class_stats(data); // rejects empty classes
    const Index d1 = data.d1();
    const Index d2 = data.d2();
    const double n = static_cast<double>(data.size());
    const double scale1 = 1.0 / (n * static_cast<double>(d2));
    const double scale2 = 1.0 / (n * static_cast<double>(d1));

    BilinearScatter s;
    s.s1w = Matrix::Zero(d1, d1);
    s.s1b = Matrix::Zero(d1, d1);
    s.s1t = Matrix::Zero(d1, d1);
    s.s2w = Matrix::Zero(d2, d2);
    s.s2b = Matrix::Zero(d2, d2);
    s.s2t = Matrix::Zero(d2, d2);

    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto k = static_cast<std::size_t>(data.labels[i]);
        Matrix dw = data.observations[i] - stats.class_means[k];
        Matrix dt = data.observations[i] - stats.global_mean;
        s.s1w.noalias() += scale1 * (dw * dw.transpose());
        s.s2w.noalias() += scale2 * (dw.transpose() * dw);
        s.s1t.noalias() += scale1 * (dt * dt.transpose());
        s.s2t.noalias() += scale2 * (dt.transpose() * dt);
    }
    for (std::size_t k = 0; k < stats.counts.size(); ++k) {
        const double nk = static_cast<double>(stats.counts[k]);
        Matrix db = stats.class_means[k] - stats.global_mean;
        s.s1b.noalias() += (nk * scale1) * (db * db.transpose());
        s.s2b.noalias() += (nk * scale2) * (db.transpose() * db);
    }
    s.sigma1_sq = s.s1t.trace() / static_cast<double>(d1);
    s.sigma2_sq = s.s2t.trace() / static_cast<double>(d2);
    return s;
}

Matrix between_factor(const ClassStats& stats, std::size_t n_total, int direction) {
    if (direction != 1 && direction != 2) {
        throw input_error("between_factor: direction must be 1 or 2");
    }
    const Index rows = direction == 1 ? stats.global_mean.rows() : stats.global_mean.cols();
    const Index block = direction == 1 ? stats.global_mean.cols() : stats.global_mean.rows();
    const auto c = static_cast<Index>(stats.counts.size());
    const double denom = static_cast<double>(n_total) * static_cast<double>(block);

    Matrix f(rows, block * c);
    for (Index k = 0; k < c; ++k) {
        const double w = std::sqrt(static_cast<double>(stats.counts[static_cast<std::size_t>(k)]) / denom);
        Matrix db = stats.class_means[static_cast<std::size_t>(k)] - stats.global_mean;
        if (direction == 1) {
            f.middleCols(k * block, block) = w * db;
        } else {
            f.middleCols(k * block, block) = w * db.transpose();
        }
    }
    return f;
}

} // namespace rblda
