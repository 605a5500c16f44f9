#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "blockspec/blockspec.hpp"

using namespace blockspec;

TEST_CASE("params validation") {
    BlockParams bad{10, 0.3, 0.3, {}, 2};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);  // p == q rejected
    BlockParams bad2{10, 0.5, 0.1, {5, 4}, 0};
    CHECK_THROWS_AS(bad2.validate(), std::invalid_argument);  // sizes don't sum to n
    BlockParams ok{10, 0.5, 0.1, {5, 5}, 0};
    CHECK_NOTHROW(ok.validate());
}

TEST_CASE("deterministic block-diagonal sample at p=1, q=0") {
    auto model = make_planted(BlockParams{4, 1.0, 0.0, {2, 2}, 0}, 7);
    const Matrix a = sample_ssbm(model);
    Matrix expect = Matrix::Zero(4, 4);
    expect.block(0, 0, 2, 2).setOnes();
    expect.block(2, 2, 2, 2).setOnes();
    CHECK((a - expect).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sampler is deterministic and symmetric") {
    auto model = make_planted(BlockParams{30, 0.6, 0.2, {}, 3}, 99);
    const Matrix a1 = sample_ssbm(model);
    const Matrix a2 = sample_ssbm(model);
    CHECK((a1 - a2).cwiseAbs().maxCoeff() == 0.0);
    CHECK(is_symmetric(a1));
}

TEST_CASE("empirical edge densities at n=1000") {
    auto model = make_planted(BlockParams{1000, 0.5, 0.1, {}, 4}, 3);
    const Matrix a = sample_ssbm(model);
    double intra = 0, intra_n = 0, inter = 0, inter_n = 0;
    for (int i = 0; i < 1000; ++i)
        for (int j = i + 1; j < 1000; ++j) {
            if (model.labels[i] == model.labels[j]) {
                intra += a(i, j);
                intra_n++;
            } else {
                inter += a(i, j);
                inter_n++;
            }
        }
    CHECK(intra / intra_n == doctest::Approx(0.5).epsilon(0.02));
    CHECK(inter / inter_n == doctest::Approx(0.1).epsilon(0.1));
}

TEST_CASE("assign_uniform") {
    CHECK(assign_uniform(5, 1, 3) == std::vector<int>{0, 0, 0, 0, 0});
    CHECK(assign_uniform(100, 4, 12) == assign_uniform(100, 4, 12));

    auto labels = assign_uniform(10000, 4, 5);
    std::vector<int> counts(4, 0);
    for (int l : labels) counts[l]++;
    for (int c : counts) {
        CHECK(c > 2300);  // binomial concentration, sd ~ 43
        CHECK(c < 2700);
    }
}

TEST_CASE("center") {
    Matrix a = Matrix::Ones(3, 3);
    CHECK((center(a, 0.0) - a).cwiseAbs().maxCoeff() == 0.0);
    CHECK(center(a, 1.0).cwiseAbs().maxCoeff() == 0.0);
    a(0, 1) = 1.0;
    CHECK(center(a, 0.25)(0, 1) == doctest::Approx(0.75));
}

TEST_CASE("split invariants") {
    auto model = make_planted(BlockParams{40, 0.7, 0.2, {}, 4}, 21);
    const Matrix b = center(sample_ssbm(model), model.params.q);
    auto s = split(b, model);

    CHECK((s.L + s.R - b).cwiseAbs().maxCoeff() == 0.0);
    for (int i = 0; i < 40; ++i)
        for (int j = 0; j < 40; ++j) {
            if (model.labels[i] == model.labels[j])
                CHECK(s.L(i, j) == doctest::Approx(0.5));
            else
                CHECK(s.L(i, j) == 0.0);
            // R entries in {1-p, -p, 1-q, -q}
            const double r = s.R(i, j);
            const bool ok = std::abs(r - 0.3) < 1e-12 || std::abs(r + 0.7) < 1e-12 ||
                            std::abs(r - 0.8) < 1e-12 || std::abs(r + 0.2) < 1e-12;
            CHECK(ok);
        }
}

TEST_CASE("split with p=1, q=0 has zero noise") {
    auto model = make_planted(BlockParams{10, 1.0, 0.0, {6, 4}, 0}, 1);
    const Matrix b = center(sample_ssbm(model), 0.0);
    auto s = split(b, model);
    CHECK(s.R.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("no-self-loop mode zeroes the diagonal") {
    auto model = make_planted(BlockParams{20, 0.8, 0.1, {}, 2}, 8, /*self_loops=*/false);
    const Matrix a = sample_ssbm(model);
    CHECK(a.diagonal().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("L^r closed form: (p-q)^r s^(r-1) within blocks") {
    auto model = make_planted(BlockParams{24, 0.9, 0.4, {10, 8, 6}, 0}, 2);
    const Matrix L = structure_matrix(model);
    for (int r = 1; r <= 8; ++r) {
        auto p = scaled_power(L, r);
        const Matrix rep = p.represented();
        for (int i = 0; i < 24; ++i)
            for (int j = 0; j < 24; ++j) {
                if (model.labels[i] == model.labels[j]) {
                    const double s = model.params.sizes[model.labels[i]];
                    const double expect = std::pow(0.5, r) * std::pow(s, r - 1);
                    CHECK(rep(i, j) == doctest::Approx(expect).epsilon(1e-9));
                } else {
                    CHECK(std::abs(rep(i, j)) < 1e-12);
                }
            }
    }
    // L^2 entry within one cluster of size 2 at p-q = 0.5 equals 0.5.
    auto tiny = make_planted(BlockParams{4, 0.5, 0.0, {2, 2}, 0}, 1);
    const Matrix L2 = structure_matrix(tiny);
    CHECK((L2 * L2)(0, 1) == doctest::Approx(0.5));
}

TEST_CASE("noise is zero mean over blocks") {
    auto model = make_planted(BlockParams{400, 0.5, 0.1, {}, 2}, 17);
    const Matrix b = center(sample_ssbm(model), 0.1);
    auto s = split(b, model);
    // Mean of R over each (block, block) pair should be within 5 sigma / sqrt(count).
    const int k = 2;
    for (int bi = 0; bi < k; ++bi)
        for (int bj = bi; bj < k; ++bj) {
            double sum = 0;
            int count = 0;
            for (int i = 0; i < 400; ++i)
                for (int j = i; j < 400; ++j) {
                    if (model.labels[i] != bi || model.labels[j] != bj) continue;
                    sum += s.R(i, j);
                    count++;
                }
            const double sigma = std::sqrt(noise_sigma2(0.5, 0.1));
            CHECK(std::abs(sum / count) <= 5.0 * sigma / std::sqrt(double(count)));
        }
}

TEST_CASE("sigma bound from the model") {
    CHECK(noise_sigma2(0.5, 0.1) == doctest::Approx(0.25));
    // sigma^2 <= p(1-q)
    for (double p : {0.3, 0.5, 0.75})
        for (double q : {0.05, 0.1, 0.25})
            CHECK(noise_sigma2(p, q) <= p * (1.0 - q) + 1e-12);
}

TEST_CASE("Weyl sandwich per instance") {
    auto model = make_planted(BlockParams{200, 0.6, 0.2, {}, 2}, 31);
    const Matrix b = center(sample_ssbm(model), 0.2);
    auto s = split(b, model);
    const double r_norm = spectral_norm(s.R);
    auto eb = sym_eigen(b);
    auto el = sym_eigen(s.L);
    for (int i = 0; i < 200; ++i)
        CHECK(std::abs(eb.eigenvalues[i] - el.eigenvalues[i]) <= r_norm + 1e-8);
}
