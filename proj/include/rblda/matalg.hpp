#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace rblda {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Rank-revealing factorization M M' = U diag(gamma) U' keeping only
/// components above the numerical-rank tolerance. `spectrum` holds the
/// eigenvalues of M M' (squared singular values of M), descending.
struct CondensedSvd {
    Matrix left_basis; // d x rank, orthonormal columns
    Vector spectrum;   // rank, positive, non-increasing

    Index rank() const { return spectrum.size(); }
};

/// Eigenpairs of a symmetric PSD matrix (or of a definite pencil), values
/// descending, sub-tolerance components dropped.
struct EigPairs {
    Matrix vectors; // d x q
    Vector values;  // q, non-negative, non-increasing
};

/// Factorize M M' through the smaller of the two Gram matrices (M M' when
/// d <= m, M' M otherwise). Components are retained iff their Gram
/// eigenvalue exceeds max(d, m) * eps * gamma_max; basis columns carry a
/// deterministic sign (largest-magnitude entry positive).
CondensedSvd condensed_svd(const Matrix& m);

/// Eigendecomposition of a symmetric PSD matrix, same retention rule and
/// sign convention as condensed_svd. Rejects matrices whose asymmetry
/// exceeds 1e-8 * max|S|.
EigPairs sym_psd_eig(const Matrix& s);

/// Reference solver for S_reg^{-1} S_b V = V Lambda with V' S_reg V = I.
/// Deliberately slow and direct: eigendecompose S_reg, form its inverse
/// square root, eigendecompose the whitened S_b. Returns the
/// rank(S_b-in-whitened-space) leading pairs; the count is capped by the
/// rank of S_b judged at the pencil's scale, since whitening amplifies
/// noise along near-null directions of S_reg. S_reg must be positive
/// definite (min eigenvalue > 1e-12 * max).
EigPairs gen_eig_oracle(const Matrix& s_b, const Matrix& s_reg);

/// Numerical rank of a symmetric PSD matrix judged against an external
/// eigenvalue scale: eigenvalues count only above
/// d * eps * max(lambda_max, reference). A between-class matrix whose
/// energy sits at the rounding floor of the total scatter has rank 0 here
/// even though it is nonzero relative to itself.
Index psd_rank(const Matrix& s, double reference);

/// Rank of F F' under the same rule, computed through the smaller Gram
/// matrix of F; `reference` is in F F' eigenvalue units.
Index factor_rank(const Matrix& f, double reference);

/// Number of condensed_svd invocations since the last reset. Test
/// instrumentation for the model-selection amortization contract;
/// thread-safe.
std::uint64_t condensed_svd_call_count();
void reset_condensed_svd_call_count();

} // namespace rblda
