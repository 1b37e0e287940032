#include "rblda/rlda.hpp"

#include "rblda/errors.hpp"
#include "rblda/scatter.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <string>

namespace rblda {

const char* to_string(BasisScaling s) {
    switch (s) {
        case BasisScaling::t_orthogonal: return "t";
        case BasisScaling::w_orthogonal: return "w";
        case BasisScaling::unit_column: return "unit";
    }
    return "?";
}

BasisScaling scaling_from_string(const std::string& s) {
    if (s == "t" || s == "t_orthogonal") return BasisScaling::t_orthogonal;
    if (s == "w" || s == "w_orthogonal") return BasisScaling::w_orthogonal;
    if (s == "unit" || s == "unit_column") return BasisScaling::unit_column;
    throw input_error("unknown scaling \"" + s + "\" (expected t, w or unit)");
}

RldaBasis RldaBasis::leading(Index q) const {
    if (q < 0 || q > components()) {
        throw input_error("RldaBasis::leading: requested more columns than available");
    }
    RldaBasis out;
    out.basis = basis.leftCols(q);
    out.values = values.head(q);
    out.scaling = scaling;
    out.r = r;
    return out;
}

Matrix shrink(const Matrix& s, double r, double sigma_sq) {
    if (!(r > 0.0) || r > 1.0) {
        throw input_error("shrink: r must lie in (0, 1]");
    }
    if (!(sigma_sq > 0.0)) {
        throw input_error("shrink: sigma_sq must be positive");
    }
    if (s.rows() != s.cols()) {
        throw input_error("shrink: matrix must be square");
    }
    Matrix out = (1.0 - r) * s;
    out.diagonal().array() += r * sigma_sq;
    return out;
}

namespace {

void check_regularizer(double r) {
    if (!(r > 0.0) || r > 1.0) {
        throw input_error("regularization parameter must lie in (0, 1]");
    }
}

/// Scale factors turning the Lambda-orthogonal columns (V' S_t^r V = Lambda)
/// into the requested scaling; throws when 1 - (1-r) lambda degenerates.
Vector output_scale(const Vector& values, double r, BasisScaling scaling) {
    Vector scale(values.size());
    for (Index i = 0; i < values.size(); ++i) {
        const double lam = values(i);
        const double feas = 1.0 - (1.0 - r) * lam;
        if (feas <= 1e-12) {
            throw degeneracy_error("eigenvalue " + std::to_string(lam) +
                                   " reaches the feasibility bound 1/(1-r)");
        }
        switch (scaling) {
            case BasisScaling::t_orthogonal:
                scale(i) = 1.0 / std::sqrt(lam);
                break;
            case BasisScaling::w_orthogonal:
                scale(i) = 1.0 / std::sqrt(lam * feas);
                break;
            case BasisScaling::unit_column:
                scale(i) = 1.0; // normalized by the caller afterwards
                break;
        }
    }
    return scale;
}

} // namespace

RldaBasis rlda_direct(const Matrix& x, const std::vector<int>& labels,
                      int num_classes, double r) {
    check_regularizer(r);
    auto [sb, sw, st] = vector_scatters(x, labels, num_classes);
    (void)sw;
    const double sigma_sq = st.trace() / static_cast<double>(st.rows());
    if (!(sigma_sq > 0.0)) {
        throw degeneracy_error("rlda_direct: zero total scatter");
    }
    EigPairs pairs = gen_eig_oracle(sb, shrink(st, r, sigma_sq));

    RldaBasis out;
    out.basis = std::move(pairs.vectors);
    out.values = std::move(pairs.values);
    out.scaling = BasisScaling::t_orthogonal;
    out.r = r;
    return out;
}

RldaBasis rlda_fast(const Matrix& x, const std::vector<int>& labels,
                    int num_classes, double r, GRoute route) {
    check_regularizer(r);
    const Index d = x.rows();
    const Index n = x.cols();
    if (n == 0 || static_cast<std::size_t>(n) != labels.size()) {
        throw input_error("rlda_fast: label count must match observation count");
    }

    std::vector<std::size_t> counts(static_cast<std::size_t>(num_classes), 0);
    for (int lab : labels) {
        if (lab < 0 || lab >= num_classes) {
            throw input_error("rlda_fast: label out of range");
        }
        ++counts[static_cast<std::size_t>(lab)];
    }
    for (int k = 0; k < num_classes; ++k) {
        if (counts[static_cast<std::size_t>(k)] == 0) {
            throw input_error("rlda_fast: class " + std::to_string(k) + " is empty");
        }
    }

    // Centered data scaled by 1/sqrt(n) so that S_t = Xs Xs' and
    // S_b = F_b F_b' carry the definitional 1/n.
    Vector mean = x.rowwise().mean();
    Matrix xs = (x.colwise() - mean) / std::sqrt(static_cast<double>(n));
    const double sigma_sq = xs.squaredNorm() / static_cast<double>(d);
    if (!(sigma_sq > 0.0)) {
        throw degeneracy_error("rlda_fast: zero total scatter");
    }

    // F_b column k = sqrt(n_k / n) (m_k - m) = Xs E Pi^{-1/2}.
    Matrix fb = Matrix::Zero(d, num_classes);
    for (Index i = 0; i < n; ++i) {
        fb.col(labels[static_cast<std::size_t>(i)]) += xs.col(i);
    }
    for (int k = 0; k < num_classes; ++k) {
        fb.col(k) /= std::sqrt(static_cast<double>(counts[static_cast<std::size_t>(k)]));
    }

    const bool sample_side =
        route == GRoute::sample_side || (route == GRoute::automatic && n < d);
    Matrix g;
    if (sample_side) {
        // G = Xs ((1-r) Xs'Xs + r sigma^2 I_n)^{-1} E Pi^{-1/2}
        Matrix b = (1.0 - r) * (xs.transpose() * xs);
        b.diagonal().array() += r * sigma_sq;
        Matrix rhs = Matrix::Zero(n, num_classes);
        for (Index i = 0; i < n; ++i) {
            const int k = labels[static_cast<std::size_t>(i)];
            rhs(i, k) = 1.0 / std::sqrt(static_cast<double>(counts[static_cast<std::size_t>(k)]));
        }
        g = xs * Eigen::LLT<Matrix>(b).solve(rhs);
    } else {
        // G = ((1-r) Xs Xs' + r sigma^2 I_d)^{-1} F_b
        Matrix a = (1.0 - r) * (xs * xs.transpose());
        a.diagonal().array() += r * sigma_sq;
        g = Eigen::LLT<Matrix>(a).solve(fb);
    }

    Matrix rmat = fb.transpose() * g;
    rmat = 0.5 * (rmat + rmat.transpose()).eval();
    EigPairs pairs = sym_psd_eig(rmat);

    // Between-class energy at the rounding floor of tr(S_t) is noise, not
    // a discriminant direction.
    const Index q = std::min(factor_rank(fb, sigma_sq * static_cast<double>(d)),
                             pairs.values.size());

    RldaBasis out;
    out.values = pairs.values.head(q);
    out.scaling = BasisScaling::w_orthogonal;
    out.r = r;
    out.basis = g * pairs.vectors.leftCols(q) *
                output_scale(out.values, r, BasisScaling::w_orthogonal).asDiagonal();
    return out;
}

RldaBasis t_to_w(const RldaBasis& basis) {
    if (basis.scaling != BasisScaling::t_orthogonal) {
        throw input_error("t_to_w: input basis must be t-orthogonal");
    }
    RldaBasis out;
    out.r = basis.r;
    out.scaling = BasisScaling::w_orthogonal;
    out.values.resize(basis.values.size());
    out.basis.resize(basis.basis.rows(), basis.basis.cols());
    for (Index i = 0; i < basis.values.size(); ++i) {
        const double lam = basis.values(i);
        const double feas = 1.0 - (1.0 - basis.r) * lam;
        if (feas <= 1e-12) {
            throw degeneracy_error("t_to_w: eigenvalue " + std::to_string(lam) +
                                   " reaches the feasibility bound");
        }
        out.values(i) = lam / feas;
        out.basis.col(i) = basis.basis.col(i) / std::sqrt(feas);
    }
    return out;
}

RldaBasis unit_normalized(const RldaBasis& basis) {
    RldaBasis out = basis;
    for (Index j = 0; j < out.basis.cols(); ++j) {
        const double norm = out.basis.col(j).norm();
        if (norm > 0.0) out.basis.col(j) /= norm;
    }
    out.scaling = BasisScaling::unit_column;
    return out;
}

} // namespace rblda
