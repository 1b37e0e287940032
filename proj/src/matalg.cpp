#include "rblda/matalg.hpp"

#include "rblda/errors.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <string>

namespace rblda {

namespace {

std::atomic<std::uint64_t> g_condensed_svd_calls{0};

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_finite(const Matrix& m, const char* what) {
    if (!m.allFinite()) {
        throw input_error(std::string(what) + ": non-finite entries");
    }
}

/// Flip each column so its largest-magnitude entry is positive; on equal
/// magnitudes the lowest row index decides.
void fix_column_signs(Matrix& v) {
    for (Index j = 0; j < v.cols(); ++j) {
        Index imax = 0;
        double amax = -1.0;
        for (Index i = 0; i < v.rows(); ++i) {
            const double a = std::abs(v(i, j));
            if (a > amax) {
                amax = a;
                imax = i;
            }
        }
        if (v(imax, j) < 0.0) v.col(j) = -v.col(j);
    }
}

/// Descending eigendecomposition of a symmetric matrix with sub-tolerance
/// (and negative) eigenvalues dropped. `scale` is the dimension entering
/// the tolerance, tol = scale * eps * lambda_max.
EigPairs eig_descending_truncated(const Matrix& sym, double scale) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
    if (es.info() != Eigen::Success) {
        throw degeneracy_error("eigendecomposition failed to converge");
    }
    const Vector& vals = es.eigenvalues(); // ascending
    const Index d = vals.size();
    const double vmax = d > 0 ? std::max(vals(d - 1), 0.0) : 0.0;
    const double tol = scale * kEps * vmax;

    Index keep = 0;
    for (Index i = 0; i < d; ++i) {
        if (vals(i) > tol) ++keep;
    }
    EigPairs out;
    out.values.resize(keep);
    out.vectors.resize(d, keep);
    for (Index i = 0; i < keep; ++i) {
        out.values(i) = vals(d - 1 - i);
        out.vectors.col(i) = es.eigenvectors().col(d - 1 - i);
    }
    fix_column_signs(out.vectors);
    return out;
}

} // namespace

CondensedSvd condensed_svd(const Matrix& m) {
    require_finite(m, "condensed_svd");
    g_condensed_svd_calls.fetch_add(1, std::memory_order_relaxed);

    const Index d = m.rows();
    const Index cols = m.cols();
    const double scale = static_cast<double>(std::max(d, cols));

    CondensedSvd out;
    if (d <= cols) {
        Matrix gram = m * m.transpose();
        gram = 0.5 * (gram + gram.transpose()).eval();
        EigPairs e = eig_descending_truncated(gram, scale);
        out.left_basis = std::move(e.vectors);
        out.spectrum = std::move(e.values);
    } else {
        // Tall M: the small Gram matrix M' M shares the nonzero spectrum;
        // the left factors are recovered as M V Gamma^{-1/2}.
        Matrix gram = m.transpose() * m;
        gram = 0.5 * (gram + gram.transpose()).eval();
        EigPairs e = eig_descending_truncated(gram, scale);
        out.spectrum = std::move(e.values);
        out.left_basis = m * e.vectors;
        for (Index j = 0; j < out.spectrum.size(); ++j) {
            out.left_basis.col(j) /= std::sqrt(out.spectrum(j));
        }
        fix_column_signs(out.left_basis);
    }
    return out;
}

EigPairs sym_psd_eig(const Matrix& s) {
    require_finite(s, "sym_psd_eig");
    if (s.rows() != s.cols()) {
        throw input_error("sym_psd_eig: matrix must be square");
    }
    const double smax = s.cwiseAbs().maxCoeff();
    const double asym = (s - s.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-8 * smax) {
        throw input_error("sym_psd_eig: asymmetry " + std::to_string(asym) +
                          " exceeds tolerance");
    }
    Matrix sym = 0.5 * (s + s.transpose());
    return eig_descending_truncated(sym, static_cast<double>(s.rows()));
}

Index psd_rank(const Matrix& s, double reference) {
    require_finite(s, "psd_rank");
    Matrix sym = 0.5 * (s + s.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
    const Vector& vals = es.eigenvalues();
    const Index d = vals.size();
    const double vmax = d > 0 ? std::max(vals(d - 1), 0.0) : 0.0;
    const double tol = static_cast<double>(d) * kEps * std::max(vmax, reference);
    Index rank = 0;
    for (Index i = 0; i < d; ++i) {
        if (vals(i) > tol) ++rank;
    }
    return rank;
}

Index factor_rank(const Matrix& f, double reference) {
    Matrix gram = f.rows() <= f.cols() ? Matrix(f * f.transpose())
                                       : Matrix(f.transpose() * f);
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (gram + gram.transpose()),
                                             Eigen::EigenvaluesOnly);
    const Vector& vals = es.eigenvalues();
    const Index d = vals.size();
    const double vmax = d > 0 ? std::max(vals(d - 1), 0.0) : 0.0;
    const double scale = static_cast<double>(std::max(f.rows(), f.cols()));
    const double tol = scale * kEps * std::max(vmax, reference);
    Index rank = 0;
    for (Index i = 0; i < d; ++i) {
        if (vals(i) > tol) ++rank;
    }
    return rank;
}

EigPairs gen_eig_oracle(const Matrix& s_b, const Matrix& s_reg) {
    require_finite(s_b, "gen_eig_oracle");
    require_finite(s_reg, "gen_eig_oracle");
    if (s_b.rows() != s_b.cols() || s_reg.rows() != s_reg.cols() ||
        s_b.rows() != s_reg.rows()) {
        throw input_error("gen_eig_oracle: dimension mismatch");
    }

    // Reference solver, so accuracy beats speed: the explicit whitening
    // sandwich W S_b W loses ~eps * cond(S_reg) absolute accuracy, which
    // at shrinkage values near 1e-6 lands above the comparison tolerances.
    // Extended precision keeps the reference trustworthy there.
    using LdMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
    using LdVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

    LdMatrix reg_ld = s_reg.cast<long double>();
    reg_ld = (0.5L * (reg_ld + reg_ld.transpose())).eval();
    Eigen::SelfAdjointEigenSolver<LdMatrix> es(reg_ld);
    if (es.info() != Eigen::Success) {
        throw degeneracy_error("gen_eig_oracle: metric eigendecomposition failed");
    }
    const LdVector& dv = es.eigenvalues();
    const double dmax = static_cast<double>(dv(dv.size() - 1));
    const double dmin = static_cast<double>(dv(0));
    if (!(dmin > 1e-12 * dmax)) {
        throw input_error("gen_eig_oracle: metric is singular, minimum eigenvalue " +
                          std::to_string(dmin));
    }

    LdMatrix w = es.eigenvectors() * dv.cwiseSqrt().cwiseInverse().asDiagonal() *
                 es.eigenvectors().transpose();
    LdMatrix b_ld = s_b.cast<long double>();
    LdMatrix c = w * (0.5L * (b_ld + b_ld.transpose())) * w;
    c = (0.5L * (c + c.transpose())).eval();
    Eigen::SelfAdjointEigenSolver<LdMatrix> ces(c);
    if (ces.info() != Eigen::Success) {
        throw degeneracy_error("gen_eig_oracle: whitened eigendecomposition failed");
    }

    // Retention: the double-precision rank rule, additionally capped by
    // the rank of S_b at the pencil scale (whitening amplifies noise in
    // near-null metric directions into spurious pairs).
    const Index d = c.rows();
    const long double cmax = std::max(ces.eigenvalues()(d - 1), 0.0L);
    const long double tol = static_cast<long double>(d) * kEps * cmax;
    Index above = 0;
    for (Index i = 0; i < d; ++i) {
        if (ces.eigenvalues()(i) > tol) ++above;
    }
    const Index q = std::min(psd_rank(s_b, dmax), above);

    EigPairs out;
    out.values.resize(q);
    out.vectors.resize(d, q);
    LdMatrix mapped = w * ces.eigenvectors();
    for (Index i = 0; i < q; ++i) {
        out.values(i) = static_cast<double>(ces.eigenvalues()(d - 1 - i));
        out.vectors.col(i) = mapped.col(d - 1 - i).cast<double>();
    }
    fix_column_signs(out.vectors);
    return out;
}

std::uint64_t condensed_svd_call_count() {
    return g_condensed_svd_calls.load(std::memory_order_relaxed);
}

void reset_condensed_svd_call_count() {
    g_condensed_svd_calls.store(0, std::memory_order_relaxed);
}

} // namespace rblda
