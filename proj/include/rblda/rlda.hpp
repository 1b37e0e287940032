#pragma once

#include "rblda/matalg.hpp"

#include <string>
#include <vector>

namespace rblda {

enum class BasisScaling {
    t_orthogonal, // V' S_t^r V = I
    w_orthogonal, // V' S_w^r V = I
    unit_column,  // every column has unit Euclidean norm
};

const char* to_string(BasisScaling s);
BasisScaling scaling_from_string(const std::string& s);

/// Discriminant basis of the vector-case regularized problem.
///
/// `values` holds the generalized eigenvalues produced by the solving
/// pencil: the solvers report the eigenvalues of (S_b, S_t^r) regardless
/// of how the columns are scaled; t_to_w maps them to the (S_b, S_w^r)
/// spectrum along with the column rescaling.
struct RldaBasis {
    Matrix basis; // d x q
    Vector values; // q, descending
    BasisScaling scaling = BasisScaling::t_orthogonal;
    double r = 1.0;

    Index components() const { return values.size(); }

    /// First q columns (q <= components()); callers may request fewer
    /// directions, never more.
    RldaBasis leading(Index q) const;
};

/// Shrink a PSD scatter toward the scalar covariance:
/// (1 - r) S + r sigma_sq I with r in (0, 1]. r = 0 is rejected.
Matrix shrink(const Matrix& s, double r, double sigma_sq);

/// Direct reference solution of the t-constrained regularized problem:
/// forms S_b and S_t^r explicitly and calls gen_eig_oracle. O(d^2 n + d^3).
RldaBasis rlda_direct(const Matrix& x, const std::vector<int>& labels,
                      int num_classes, double r);

/// Which formula computes the d x c matrix G in the fast solver; automatic
/// selection takes the data-side formula when n < d. Exposed so tests can
/// cross-check the two routes.
enum class GRoute { automatic, feature_side, sample_side };

/// Factorized solver: G and R = F_b' G are formed from the centered data,
/// the c x c matrix R is eigendecomposed, and the w-scaled basis
/// G V_R [Lambda (I - (1-r) Lambda)]^{-1/2} is returned. Eigenvalues match
/// rlda_direct on the same inputs.
RldaBasis rlda_fast(const Matrix& x, const std::vector<int>& labels,
                    int num_classes, double r, GRoute route = GRoute::automatic);

/// Map a t-orthogonal basis to the w-orthogonal one:
/// V_w = V_t (I - (1-r) Lambda_t)^{-1/2},
/// Lambda_w = Lambda_t (I - (1-r) Lambda_t)^{-1}.
RldaBasis t_to_w(const RldaBasis& basis);

/// Rescale every column to unit Euclidean norm; values are kept.
RldaBasis unit_normalized(const RldaBasis& basis);

} // namespace rblda
