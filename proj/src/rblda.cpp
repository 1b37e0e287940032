#include "rblda/rblda.hpp"

#include "rblda/errors.hpp"
#include "rblda/scatter.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <string>

namespace rblda {

namespace {

void check_regularizer(double r) {
    if (!(r > 0.0) || r > 1.0) {
        throw input_error("regularization parameter must lie in (0, 1]");
    }
}

/// 1 - (1-r) lambda per eigenvalue, throwing on degeneracy. Strictly
/// positive for any valid pencil since S_t^r - (1-r) S_b = S_w^r > 0.
Vector feasibility_gaps(const Vector& values, double r) {
    Vector gaps(values.size());
    for (Index i = 0; i < values.size(); ++i) {
        gaps(i) = 1.0 - (1.0 - r) * values(i);
        if (gaps(i) <= 1e-12) {
            throw degeneracy_error("eigenvalue " + std::to_string(values(i)) +
                                   " reaches the feasibility bound 1/(1-r)");
        }
    }
    return gaps;
}

/// Stack the centered observations of one direction: d_l x (d_other * n),
/// observation i transposed for direction 2.
Matrix centered_stack(const MtsDataset& data, const Matrix& mean, int direction) {
    const Index d = direction == 1 ? data.d1() : data.d2();
    const Index block = direction == 1 ? data.d2() : data.d1();
    const auto n = static_cast<Index>(data.size());

    Matrix stack(d, block * n);
    for (Index i = 0; i < n; ++i) {
        Matrix centered = data.observations[static_cast<std::size_t>(i)] - mean;
        if (direction == 1) {
            stack.middleCols(i * block, block) = centered;
        } else {
            stack.middleCols(i * block, block) = centered.transpose();
        }
    }
    return stack;
}

/// Scale factor turning the centered stack into the square root of S_lt.
double stack_scale(const MtsDataset& data, int direction) {
    const Index block = direction == 1 ? data.d2() : data.d1();
    return 1.0 / std::sqrt(static_cast<double>(data.size()) * static_cast<double>(block));
}

DirectionCache build_cache(const MtsDataset& data, const ClassStats& stats, int direction) {
    const Index d = direction == 1 ? data.d1() : data.d2();

    Matrix stack = centered_stack(data, stats.global_mean, direction);
    Matrix scaled = stack_scale(data, direction) * stack;
    CondensedSvd svd = condensed_svd(scaled);
    if (svd.rank() == 0) {
        throw degeneracy_error("rblda_precompute: zero total scatter in direction " +
                               std::to_string(direction) + " (constant data)");
    }

    DirectionCache cache;
    cache.direction = direction;
    cache.sigma_sq = scaled.squaredNorm() / static_cast<double>(d);
    cache.original_dim = d;
    cache.block = direction == 1 ? data.d2() : data.d1();
    cache.n_obs = data.size();
    cache.gamma = std::move(svd.spectrum);
    cache.u_basis = std::move(svd.left_basis);
    cache.projected_data = cache.u_basis.transpose() * stack;
    cache.between_factor =
        cache.u_basis.transpose() * between_factor(stats, data.size(), direction);
    return cache;
}

/// Shared direction solve in U-coordinates. gamma/sigma_sq/f carry the
/// definitional scatter scaling; d_original drives the branch predicate.
DirectionBasis solve_direction(const Vector& gamma, double sigma_sq, const Matrix& f,
                               Index d_original, double r, BasisScaling scaling) {
    check_regularizer(r);
    Vector gamma_r = (1.0 - r) * gamma;
    gamma_r.array() += r * sigma_sq;

    // Between-class rank at the total-scatter scale caps the component
    // count; otherwise whitening amplifies rounding noise into spurious
    // directions.
    const Index cap = factor_rank(f, sigma_sq * static_cast<double>(d_original));

    DirectionBasis out;
    if (f.cols() >= d_original) {
        // R11 route: whiten the between-class factor by Gamma_r^{-1/2}.
        Vector inv_sqrt = gamma_r.cwiseSqrt().cwiseInverse();
        Matrix fw = inv_sqrt.asDiagonal() * f;
        Matrix r11 = fw * fw.transpose();
        r11 = 0.5 * (r11 + r11.transpose()).eval();
        EigPairs pairs = sym_psd_eig(r11);
        const Index q = std::min(cap, pairs.values.size());
        out.values = pairs.values.head(q);
        Vector gaps = feasibility_gaps(out.values, r);
        out.basis = inv_sqrt.asDiagonal() * pairs.vectors.leftCols(q); // t-orthogonal
        switch (scaling) {
            case BasisScaling::t_orthogonal:
                break;
            case BasisScaling::w_orthogonal:
            case BasisScaling::unit_column:
                out.basis *= gaps.cwiseSqrt().cwiseInverse().asDiagonal();
                break;
        }
    } else {
        // G12/R12 route: the small d_other*c eigenproblem.
        Matrix g = gamma_r.cwiseInverse().asDiagonal() * f;
        Matrix r12 = f.transpose() * g;
        r12 = 0.5 * (r12 + r12.transpose()).eval();
        EigPairs pairs = sym_psd_eig(r12);
        const Index q = std::min(cap, pairs.values.size());
        out.values = pairs.values.head(q);
        Vector gaps = feasibility_gaps(out.values, r);
        out.basis = g * pairs.vectors.leftCols(q); // V' S^r V = Lambda
        switch (scaling) {
            case BasisScaling::t_orthogonal:
                out.basis *= out.values.cwiseSqrt().cwiseInverse().asDiagonal();
                break;
            case BasisScaling::w_orthogonal:
            case BasisScaling::unit_column:
                out.basis *=
                    (out.values.array() * gaps.array()).sqrt().inverse().matrix().asDiagonal();
                break;
        }
    }
    if (scaling == BasisScaling::unit_column) {
        for (Index j = 0; j < out.basis.cols(); ++j) {
            const double norm = out.basis.col(j).norm();
            if (norm > 0.0) out.basis.col(j) /= norm;
        }
    }
    return out;
}

/// Original-space solve of one direction for rblda_fit_v1.
DirectionBasis solve_direction_v1(const MtsDataset& data, const ClassStats& stats,
                                  const Matrix& s_t, const Matrix& s_b, double sigma_sq,
                                  int direction, double r, BasisScaling scaling) {
    check_regularizer(r);
    const Index d = s_t.rows();
    const Index block = direction == 1 ? data.d2() : data.d1();
    const auto n = static_cast<Index>(data.size());
    const Index oc = block * static_cast<Index>(data.num_classes);
    const Index cap = psd_rank(s_b, sigma_sq * static_cast<double>(d));

    DirectionBasis out;
    if (oc >= d) {
        // R11 route through the eigendecomposition of S_lt.
        EigPairs te = sym_psd_eig(s_t);
        Vector gamma_r = (1.0 - r) * te.values;
        gamma_r.array() += r * sigma_sq;
        Vector inv_sqrt = gamma_r.cwiseSqrt().cwiseInverse();
        Matrix half = inv_sqrt.asDiagonal() * (te.vectors.transpose() * s_b * te.vectors) *
                      inv_sqrt.asDiagonal();
        half = 0.5 * (half + half.transpose()).eval();
        EigPairs pairs = sym_psd_eig(half);
        const Index q = std::min(cap, pairs.values.size());
        out.values = pairs.values.head(q);
        Vector gaps = feasibility_gaps(out.values, r);
        out.basis =
            te.vectors * (inv_sqrt.asDiagonal() * pairs.vectors.leftCols(q)); // t-orthogonal
        if (scaling != BasisScaling::t_orthogonal) {
            out.basis *= gaps.cwiseSqrt().cwiseInverse().asDiagonal();
        }
    } else {
        Matrix f = between_factor(stats, data.size(), direction);
        Matrix g;
        if (block * n < d) {
            // Sample-side route through T^r = (1-r) X'X + r sigma^2 I.
            Matrix stack =
                stack_scale(data, direction) * centered_stack(data, stats.global_mean, direction);
            Matrix t_r = (1.0 - r) * (stack.transpose() * stack);
            t_r.diagonal().array() += r * sigma_sq;
            Matrix rhs = Matrix::Zero(block * n, oc);
            for (Index i = 0; i < n; ++i) {
                const auto k = static_cast<Index>(data.labels[static_cast<std::size_t>(i)]);
                const double w = 1.0 / std::sqrt(static_cast<double>(
                                     stats.counts[static_cast<std::size_t>(k)]));
                rhs.block(i * block, k * block, block, block) =
                    w * Matrix::Identity(block, block);
            }
            g = stack * Eigen::LLT<Matrix>(t_r).solve(rhs);
        } else {
            Matrix s_r = (1.0 - r) * s_t;
            s_r.diagonal().array() += r * sigma_sq;
            g = Eigen::LLT<Matrix>(s_r).solve(f);
        }
        Matrix r12 = f.transpose() * g;
        r12 = 0.5 * (r12 + r12.transpose()).eval();
        EigPairs pairs = sym_psd_eig(r12);
        const Index q = std::min(cap, pairs.values.size());
        out.values = pairs.values.head(q);
        Vector gaps = feasibility_gaps(out.values, r);
        out.basis = g * pairs.vectors.leftCols(q);
        if (scaling == BasisScaling::t_orthogonal) {
            out.basis *= out.values.cwiseSqrt().cwiseInverse().asDiagonal();
        } else {
            out.basis *=
                (out.values.array() * gaps.array()).sqrt().inverse().matrix().asDiagonal();
        }
    }
    if (scaling == BasisScaling::unit_column) {
        for (Index j = 0; j < out.basis.cols(); ++j) {
            const double norm = out.basis.col(j).norm();
            if (norm > 0.0) out.basis.col(j) /= norm;
        }
    }
    return out;
}

} // namespace

std::pair<DirectionCache, DirectionCache> rblda_precompute(const MtsDataset& data) {
    const ClassStats stats = class_stats(data);
    return {build_cache(data, stats, 1), build_cache(data, stats, 2)};
}

DirectionCache make_direction_cache(const MtsDataset& data, int direction) {
    if (direction != 1 && direction != 2) {
        throw input_error("make_direction_cache: direction must be 1 or 2");
    }
    const ClassStats stats = class_stats(data);
    return build_cache(data, stats, direction);
}

DirectionBasis rblda_direction(const DirectionCache& cache, double r, BasisScaling scaling) {
    return solve_direction(cache.gamma, cache.sigma_sq, cache.between_factor,
                           cache.original_dim, r, scaling);
}

RbldaModel rblda_fit_v1(const MtsDataset& data, double r1, double r2, BasisScaling scaling) {
    const ClassStats stats = class_stats(data);
    const BilinearScatter s = bilinear_scatters(data);
    if (!(s.sigma1_sq > 0.0) || !(s.sigma2_sq > 0.0)) {
        throw degeneracy_error("rblda_fit_v1: zero total scatter (constant data)");
    }

    RbldaModel model;
    model.r1 = r1;
    model.r2 = r2;
    model.in_u_space = false;
    model.mean = stats.global_mean;
    model.basis.method = BilinearMethod::rblda;
    model.basis.scaling = scaling;

    DirectionBasis b1 = solve_direction_v1(data, stats, s.s1t, s.s1b, s.sigma1_sq, 1, r1, scaling);
    DirectionBasis b2 = solve_direction_v1(data, stats, s.s2t, s.s2b, s.sigma2_sq, 2, r2, scaling);
    model.basis.v1 = std::move(b1.basis);
    model.basis.values1 = std::move(b1.values);
    model.basis.v2 = std::move(b2.basis);
    model.basis.values2 = std::move(b2.values);
    return model;
}

RbldaModel rblda_fit_v2(const MtsDataset& data, double r1, double r2, BasisScaling scaling) {
    const ClassStats stats = class_stats(data);
    auto caches = rblda_precompute(data);

    RbldaModel model;
    model.r1 = r1;
    model.r2 = r2;
    model.in_u_space = true;
    model.mean = stats.global_mean;
    model.u1 = caches.first.u_basis;
    model.u2 = caches.second.u_basis;
    model.basis.method = BilinearMethod::rblda;
    model.basis.scaling = scaling;

    DirectionBasis b1 = rblda_direction(caches.first, r1, scaling);
    DirectionBasis b2 = rblda_direction(caches.second, r2, scaling);
    model.basis.v1 = std::move(b1.basis);
    model.basis.values1 = std::move(b1.values);
    model.basis.v2 = std::move(b2.basis);
    model.basis.values2 = std::move(b2.values);
    return model;
}

BilinearBasis unit_normalized(const BilinearBasis& basis) {
    BilinearBasis out = basis;
    for (Index j = 0; j < out.v1.cols(); ++j) {
        const double norm = out.v1.col(j).norm();
        if (norm > 0.0) out.v1.col(j) /= norm;
    }
    for (Index j = 0; j < out.v2.cols(); ++j) {
        const double norm = out.v2.col(j).norm();
        if (norm > 0.0) out.v2.col(j) /= norm;
    }
    out.scaling = BasisScaling::unit_column;
    return out;
}

} // namespace rblda
