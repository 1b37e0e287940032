#pragma once

#include "rblda/dataset.hpp"

#include <tuple>
#include <vector>

namespace rblda {

/// Column-column (index 1, d1 x d1) and row-row (index 2, d2 x d2)
/// within/between/total scatter matrices of a matrix-valued dataset, all
/// carrying the 1/(n*d2) resp. 1/(n*d1) scaling, plus the per-direction
/// scalar variances sigma_l^2 = tr(S_lt)/d_l.
struct BilinearScatter {
    Matrix s1w, s1b, s1t;
    Matrix s2w, s2b, s2t;
    double sigma1_sq = 0.0;
    double sigma2_sq = 0.0;
};

/// Vector-case scatter matrices (S_b, S_w, S_t), each with the 1/n scaling
/// so that S_t = S_b + S_w holds exactly. Columns of x are observations.
std::tuple<Matrix, Matrix, Matrix> vector_scatters(const Matrix& x,
                                                   const std::vector<int>& labels,
                                                   int num_classes);

/// All six bilinear scatter matrices by grouped per-class accumulation;
/// the input need not be centered. Every class must be non-empty.
BilinearScatter bilinear_scatters(const MtsDataset& data);

/// Scaled between-class factor of a direction: for direction 1 the
/// d1 x (d2*c) block matrix whose k-th block is
/// sqrt(n_k / (n*d2)) * (W_k - W); for direction 2 the transposed-block
/// analog of size d2 x (d1*c). Satisfies F F' = S_lb.
Matrix between_factor(const ClassStats& stats, std::size_t n_total, int direction);

} // namespace rblda
