#pragma once

#include "rblda/dataset.hpp"
#include "rblda/rlda.hpp"

namespace rblda {

enum class BilinearMethod { blda, pblda, bpca, rblda };

const char* to_string(BilinearMethod m);

/// Per-direction projection bases of a bilinear transformation
/// Y = V1' X V2, with eigenvalues sorted descending per direction.
struct BilinearBasis {
    Matrix v1;      // d1 x q1 (or t1 x q1 in U-space models)
    Matrix v2;      // d2 x q2
    Vector values1; // q1
    Vector values2; // q2
    BilinearMethod method = BilinearMethod::rblda;
    BasisScaling scaling = BasisScaling::w_orthogonal;
};

enum class BldaMode { strict, pseudo };

/// Non-regularized bilinear discriminant baseline. Both directions are
/// solved separately by whitening the within-class scatter. Strict mode
/// requires S_1w and S_2w to be numerically nonsingular and otherwise
/// raises method_unavailable_error naming the direction and rank deficit;
/// pseudo mode truncates the whitening to the numerical rank instead.
BilinearBasis blda_fit(const MtsDataset& data, BldaMode mode);

/// Bilinear PCA baseline: per direction the top q_l orthonormal
/// eigenvectors of the total scatter S_lt (globally centered data).
/// q_l must not exceed rank(S_lt); 0 requests the full rank.
BilinearBasis bpca_fit(const MtsDataset& data, Index q1, Index q2);

} // namespace rblda
