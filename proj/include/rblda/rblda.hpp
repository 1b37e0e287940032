#pragma once

#include "rblda/bilinear.hpp"
#include "rblda/dataset.hpp"

#include <utility>

namespace rblda {

/// Per-direction precomputation shared by every regularization candidate:
/// one condensed SVD of the direction's total scatter plus the data and
/// between-class factor expressed in the orthonormal U-basis.
///
/// Scale conventions: `gamma` holds the eigenvalues of S_lt (with its
/// definitional 1/(n*d_other) scaling) and `between_factor` satisfies
/// F F' = U' S_lb U exactly; `projected_data` holds the unscaled centered
/// observations U'(X_i - W) stacked as t_l x (d_other * n).
struct DirectionCache {
    int direction = 1;     // 1 = column-column, 2 = row-row
    Matrix u_basis;        // d_l x t_l, orthonormal
    Vector gamma;          // t_l, positive, descending
    double sigma_sq = 0.0; // tr(S_lt) / d_l
    Matrix projected_data; // t_l x (d_other * n)
    Matrix between_factor; // t_l x (d_other * c)
    Index original_dim = 0; // d_l
    Index block = 0;        // d_other
    std::size_t n_obs = 0;

    Index rank() const { return gamma.size(); }
};

/// Result of solving one direction for one regularization value.
struct DirectionBasis {
    Matrix basis; // (t_l or d_l) x q
    Vector values; // q eigenvalues of the (S_lb, S_lt^r) pencil, descending
};

/// Fitted bilinear discriminant model. When in_u_space is set, basis.v_l
/// lives in the t_l-dimensional U-coordinates and the original-space basis
/// is U_l * v_l.
struct RbldaModel {
    BilinearBasis basis;
    double r1 = 1.0;
    double r2 = 1.0;
    bool in_u_space = false;
    Matrix u1; // d1 x t1 when in_u_space, empty otherwise
    Matrix u2; // d2 x t2 when in_u_space, empty otherwise
    Matrix mean; // training global mean, d1 x d2
};

/// Center the data and build both direction caches; performs exactly one
/// condensed SVD per direction. Throws degeneracy_error when a direction
/// has zero total scatter (constant data).
std::pair<DirectionCache, DirectionCache> rblda_precompute(const MtsDataset& data);

/// Cache for a single direction. The vector-case model selection uses only
/// the column direction of vectorized observations, so it must not pay for
/// (or count) a second SVD.
DirectionCache make_direction_cache(const MtsDataset& data, int direction);

/// Solve one direction against a cache for a given r in (0, 1]. Branches
/// on d_other * c >= d_l exactly as the scaling analysis prescribes; the
/// returned eigenvalues equal those of the direct pencil solve in either
/// branch, and the basis is scaled per `scaling` (unit_column normalizes
/// the w-scaled columns).
DirectionBasis rblda_direction(const DirectionCache& cache, double r, BasisScaling scaling);

/// Original-space implementation: forms the per-direction scatter matrices
/// and solves via R11 (d_other*c >= d_l) or G12/R12 with the G route picked
/// by d_other*n < d_l.
RbldaModel rblda_fit_v1(const MtsDataset& data, double r1, double r2,
                        BasisScaling scaling = BasisScaling::w_orthogonal);

/// U-space implementation built on rblda_precompute + rblda_direction; one
/// condensed SVD per direction regardless of how often directions are
/// re-solved.
RbldaModel rblda_fit_v2(const MtsDataset& data, double r1, double r2,
                        BasisScaling scaling = BasisScaling::w_orthogonal);

/// Column-normalize both direction bases (values kept).
BilinearBasis unit_normalized(const BilinearBasis& basis);

} // namespace rblda
