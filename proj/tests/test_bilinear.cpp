#include <doctest.h>

#include "rblda/bilinear.hpp"
#include "rblda/errors.hpp"
#include "rblda/rblda.hpp"
#include "rblda/scatter.hpp"

#include "test_support.hpp"

#include <string>

using namespace rblda;
using test_support::random_dataset;

TEST_CASE("strict blda fails on rank-deficient within-class data, pseudo succeeds") {
    // d1 = 10 > d2 (n - c) = 1 * 3, so S_1w is singular by construction.
    MtsDataset data = random_dataset(10, 1, 5, 2, 3);
    try {
        blda_fit(data, BldaMode::strict);
        FAIL("expected method_unavailable_error");
    } catch (const method_unavailable_error& e) {
        const std::string what = e.what();
        CHECK(what.find("direction 1") != std::string::npos);
        CHECK(what.find("rank deficit") != std::string::npos);
    }
    BilinearBasis pseudo = blda_fit(data, BldaMode::pseudo);
    CHECK(pseudo.v1.cols() >= 1);
}

TEST_CASE("identical class means leave no discriminant directions") {
    MtsDataset data;
    data.num_classes = 2;
    SplitMix64 rng(17);
    Matrix a = test_support::random_matrix(4, 3, rng);
    Matrix b = test_support::random_matrix(4, 3, rng);
    Matrix c = test_support::random_matrix(4, 3, rng);
    data.observations = {a, b, c, a, b, c};
    data.labels = {0, 0, 0, 1, 1, 1};
    for (BldaMode mode : {BldaMode::strict, BldaMode::pseudo}) {
        BilinearBasis basis = blda_fit(data, mode);
        CHECK(basis.values1.size() == 0);
        CHECK(basis.values2.size() == 0);
    }
}

TEST_CASE("strict blda eigenvalues match the generalized eigenproblem oracle") {
    MtsDataset data = random_dataset(5, 4, 30, 3, 29);
    BilinearBasis basis = blda_fit(data, BldaMode::strict);
    BilinearScatter s = bilinear_scatters(data);

    EigPairs o1 = gen_eig_oracle(s.s1b, s.s1w);
    REQUIRE(basis.values1.size() == o1.values.size());
    for (Index i = 0; i < o1.values.size(); ++i) {
        CHECK(std::abs(basis.values1(i) - o1.values(i)) <= 1e-8 * std::max(o1.values(0), 1e-12));
    }
    EigPairs o2 = gen_eig_oracle(s.s2b, s.s2w);
    REQUIRE(basis.values2.size() == o2.values.size());
    for (Index i = 0; i < o2.values.size(); ++i) {
        CHECK(std::abs(basis.values2(i) - o2.values(i)) <= 1e-8 * std::max(o2.values(0), 1e-12));
    }

    // Whitening constraint in both directions.
    Matrix c1 = basis.v1.transpose() * s.s1w * basis.v1;
    CHECK((c1 - Matrix::Identity(c1.rows(), c1.cols())).cwiseAbs().maxCoeff() < 1e-7);
    Matrix c2 = basis.v2.transpose() * s.s2w * basis.v2;
    CHECK((c2 - Matrix::Identity(c2.rows(), c2.cols())).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("pseudo blda equals strict blda when the within-class scatter is nonsingular") {
    MtsDataset data = random_dataset(4, 3, 24, 2, 41);
    BilinearBasis strict = blda_fit(data, BldaMode::strict);
    BilinearBasis pseudo = blda_fit(data, BldaMode::pseudo);
    CHECK((strict.v1 - pseudo.v1).cwiseAbs().maxCoeff() == 0.0);
    CHECK((strict.v2 - pseudo.v2).cwiseAbs().maxCoeff() == 0.0);
    CHECK((strict.values1 - pseudo.values1).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("pseudo blda whitens on the range of the within-class scatter") {
    MtsDataset data = random_dataset(10, 1, 5, 2, 3);
    BilinearBasis basis = blda_fit(data, BldaMode::pseudo);
    BilinearScatter s = bilinear_scatters(data);
    Matrix c1 = basis.v1.transpose() * s.s1w * basis.v1;
    CHECK((c1 - Matrix::Identity(c1.rows(), c1.cols())).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("blda is the r -> 0 limit of the regularized fit on well-conditioned data") {
    MtsDataset data = random_dataset(5, 4, 60, 3, 97);
    BilinearBasis strict = blda_fit(data, BldaMode::strict);
    const double r = 1e-6;
    RbldaModel reg = rblda_fit_v2(data, r, r, BasisScaling::w_orthogonal);

    // Map the t-pencil eigenvalues onto the w-pencil before comparing.
    auto compare = [&](const Vector& blda_vals, const Vector& reg_vals) {
        REQUIRE(blda_vals.size() <= reg_vals.size());
        for (Index i = 0; i < blda_vals.size(); ++i) {
            const double mapped = reg_vals(i) / (1.0 - (1.0 - r) * reg_vals(i));
            CHECK(std::abs(mapped - blda_vals(i)) <= 1e-3 * std::max(blda_vals(0), 1e-12));
        }
    };
    compare(strict.values1, reg.basis.values1);
    compare(strict.values2, reg.basis.values2);
}

TEST_CASE("bpca recovers a single direction of variance") {
    MtsDataset data;
    data.num_classes = 1;
    SplitMix64 rng(12);
    for (int i = 0; i < 10; ++i) {
        Matrix x = Matrix::Zero(4, 3);
        for (Index j = 0; j < 3; ++j) x(0, j) = rng.next_gaussian();
        data.observations.push_back(x);
        data.labels.push_back(0);
    }
    BilinearBasis basis = bpca_fit(data, 1, 1);
    CHECK(std::abs(basis.v1(0, 0)) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(basis.v1.col(0).tail(3).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("full-rank bpca preserves pairwise distances") {
    MtsDataset data = random_dataset(4, 3, 12, 2, 19);
    BilinearBasis basis = bpca_fit(data, 4, 3);
    auto [centered, mean] = center_dataset(data);
    (void)mean;
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = i + 1; j < 4; ++j) {
            const double raw =
                (centered.observations[i] - centered.observations[j]).norm();
            Matrix yi = basis.v1.transpose() * centered.observations[i] * basis.v2;
            Matrix yj = basis.v1.transpose() * centered.observations[j] * basis.v2;
            CHECK(std::abs((yi - yj).norm() - raw) < 1e-10 * std::max(1.0, raw));
        }
    }
}

TEST_CASE("bpca captured variance equals the top eigenvalue sum") {
    MtsDataset data = random_dataset(6, 4, 20, 2, 59);
    BilinearScatter s = bilinear_scatters(data);
    BilinearBasis basis = bpca_fit(data, 3, 2);
    const double captured1 = (basis.v1.transpose() * s.s1t * basis.v1).trace();
    CHECK(std::abs(captured1 - basis.values1.sum()) <= 1e-9 * basis.values1.sum());
    const double captured2 = (basis.v2.transpose() * s.s2t * basis.v2).trace();
    CHECK(std::abs(captured2 - basis.values2.sum()) <= 1e-9 * basis.values2.sum());
}

TEST_CASE("bpca bases are orthonormal and reject over-rank requests") {
    MtsDataset data = random_dataset(5, 4, 15, 3, 83);
    BilinearBasis basis = bpca_fit(data, 0, 0); // full rank
    Matrix g1 = basis.v1.transpose() * basis.v1;
    CHECK((g1 - Matrix::Identity(g1.rows(), g1.cols())).cwiseAbs().maxCoeff() <= 1e-10);
    Matrix g2 = basis.v2.transpose() * basis.v2;
    CHECK((g2 - Matrix::Identity(g2.rows(), g2.cols())).cwiseAbs().maxCoeff() <= 1e-10);

    CHECK_THROWS_AS(bpca_fit(data, 6, 1), input_error);
}
