#include "rblda/bilinear.hpp"

#include "rblda/errors.hpp"
#include "rblda/scatter.hpp"

#include <cmath>
#include <string>

namespace rblda {

const char* to_string(BilinearMethod m) {
    switch (m) {
        case BilinearMethod::blda: return "blda";
        case BilinearMethod::pblda: return "pblda";
        case BilinearMethod::bpca: return "bpca";
        case BilinearMethod::rblda: return "rblda";
    }
    return "?";
}

namespace {

/// One direction of the whitening solution: V = U Gamma^{-1/2} V_R with
/// (V_R, Lambda) the eigenpairs of Gamma^{-1/2} U' S_b U Gamma^{-1/2}.
void blda_direction(const Matrix& s_w, const Matrix& s_b, BldaMode mode, int direction,
                    Matrix& basis, Vector& values) {
    EigPairs w = sym_psd_eig(s_w);
    const Index d = s_w.rows();
    if (mode == BldaMode::strict && w.values.size() < d) {
        throw method_unavailable_error(
            "blda: within-class scatter of direction " + std::to_string(direction) +
            " is singular (rank deficit " + std::to_string(d - w.values.size()) + ")");
    }

    Matrix whitened_basis = w.vectors * w.values.cwiseSqrt().cwiseInverse().asDiagonal();
    Matrix r = whitened_basis.transpose() * s_b * whitened_basis;
    r = 0.5 * (r + r.transpose()).eval();
    EigPairs pairs = sym_psd_eig(r);

    // Between-class rank at the within-class scale; whitening otherwise
    // promotes rounding noise to discriminant directions.
    const double scale = w.values.size() > 0 ? w.values(0) : 0.0;
    const Index q = std::min(psd_rank(s_b, scale), pairs.values.size());
    basis = whitened_basis * pairs.vectors.leftCols(q);
    values = pairs.values.head(q);
}

} // namespace

BilinearBasis blda_fit(const MtsDataset& data, BldaMode mode) {
    const BilinearScatter s = bilinear_scatters(data);

    BilinearBasis out;
    out.method = mode == BldaMode::strict ? BilinearMethod::blda : BilinearMethod::pblda;
    out.scaling = BasisScaling::w_orthogonal;
    blda_direction(s.s1w, s.s1b, mode, 1, out.v1, out.values1);
    blda_direction(s.s2w, s.s2b, mode, 2, out.v2, out.values2);
    return out;
}

BilinearBasis bpca_fit(const MtsDataset& data, Index q1, Index q2) {
    const BilinearScatter s = bilinear_scatters(data);
    EigPairs e1 = sym_psd_eig(s.s1t);
    EigPairs e2 = sym_psd_eig(s.s2t);
    if (q1 == 0) q1 = e1.values.size();
    if (q2 == 0) q2 = e2.values.size();
    if (q1 < 0 || q1 > e1.values.size() || q2 < 0 || q2 > e2.values.size()) {
        throw input_error("bpca_fit: requested dimensions (" + std::to_string(q1) + ", " +
                          std::to_string(q2) + ") exceed the total-scatter ranks (" +
                          std::to_string(e1.values.size()) + ", " +
                          std::to_string(e2.values.size()) + ")");
    }

    BilinearBasis out;
    out.method = BilinearMethod::bpca;
    out.scaling = BasisScaling::unit_column;
    out.v1 = e1.vectors.leftCols(q1);
    out.values1 = e1.values.head(q1);
    out.v2 = e2.vectors.leftCols(q2);
    out.values2 = e2.values.head(q2);
    return out;
}

} // namespace rblda
