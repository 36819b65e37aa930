/*
 * Copyright 2026 The vecaxis Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>
#include <stop_token>

#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "vecaxis/dimreduce.hpp"
#include "vecaxis/error.hpp"

using namespace vecaxis;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no vecaxis::Error thrown";
    return ErrorKind::Canceled;
}

// Distance between unit vectors up to sign.
double sign_free_distance(std::span<const double> a, std::span<const double> b) {
    double plus = 0.0, minus = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        plus += (a[i] - b[i]) * (a[i] - b[i]);
        minus += (a[i] + b[i]) * (a[i] + b[i]);
    }
    return std::sqrt(std::min(plus, minus));
}

void expect_matches_jacobi(const Matrix& x, double tol) {
    const std::size_t k = std::min(x.rows(), x.cols());
    auto got = pca(x, k);
    auto want = oracle::jacobi(oracle::covariance(x));
    for (std::size_t c = 0; c < k; ++c) {
        ASSERT_NEAR(got.explained_variance[c], want.values[c], tol) << "component " << c;
        if (c + 1 < k) ASSERT_GE(got.explained_variance[c], got.explained_variance[c + 1]);
        // Eigenvectors are only determined for simple eigenvalues.
        const double gap_prev = c == 0 ? INFINITY : want.values[c - 1] - want.values[c];
        const double gap_next = c + 1 < want.values.size() ? want.values[c] - want.values[c + 1] : INFINITY;
        if (std::min(gap_prev, gap_next) > 1e-3) {
            ASSERT_LT(sign_free_distance(got.components.row(c), want.vectors[c]), tol) << "component " << c;
        }
    }
}

// n points in two Gaussian clusters, label 0 for the first half.
Matrix two_clusters(gen::Rng& rng, std::size_t n, std::size_t d, std::vector<int>& labels) {
    Matrix x(n, d);
    std::normal_distribution<double> g(0.0, 1.0);
    labels.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        labels[i] = i >= n / 2;
        for (std::size_t j = 0; j < d; ++j) x(i, j) = g(rng) + (labels[i] ? 10.0 : 0.0);
    }
    return x;
}

}  // namespace

// ---------------------------------------------------------------------------
// PCA

TEST(Pca, TwoPointDiagonal) {
    Matrix x(2, 2);
    x(0, 0) = -1; x(0, 1) = -1;
    x(1, 0) = 1;  x(1, 1) = 1;
    auto r = pca(x, 2);
    // Sample covariance is [[2,2],[2,2]]; the population variance along (1,1) would be 2.
    EXPECT_NEAR(r.explained_variance[0], 4.0, 1e-12);
    EXPECT_NEAR(r.explained_variance[1], 0.0, 1e-12);
    EXPECT_NEAR(r.components(0, 0), 1.0 / std::sqrt(2.0), 1e-10);
    EXPECT_NEAR(r.components(0, 1), 1.0 / std::sqrt(2.0), 1e-10);
}

TEST(Pca, MatchesJacobiOnRandomMatrices) {
    gen::Rng rng(101);
    for (int t = 0; t < 50; ++t) expect_matches_jacobi(gen::normal_matrix(rng, 5, 5), 1e-8);
    for (int t = 0; t < 50; ++t) expect_matches_jacobi(gen::normal_matrix(rng, 20, 8), 1e-8);
}

TEST(Pca, TraceIdentityAndOrthonormality) {
    gen::Rng rng(102);
    for (int t = 0; t < 30; ++t) {
        auto x = gen::normal_matrix(rng, 30, 6);
        auto r = pca(x, 6);
        auto cov = oracle::covariance(x);
        double trace = 0.0, sum = 0.0;
        for (std::size_t j = 0; j < 6; ++j) trace += cov(j, j);
        for (double v : r.explained_variance) sum += v;
        EXPECT_NEAR(sum, trace, 1e-8);
        for (std::size_t a = 0; a < 6; ++a) {
            for (std::size_t b = 0; b < 6; ++b) {
                EXPECT_NEAR(dot(r.components.row(a), r.components.row(b)), a == b ? 1.0 : 0.0, 1e-8);
            }
        }
    }
}

TEST(Pca, ProjectedColumnsAreUncorrelated) {
    gen::Rng rng(103);
    auto x = gen::normal_matrix(rng, 200, 10);
    auto r = pca(x, 4);
    auto cov = oracle::covariance(r.projected);
    const double max_var = r.explained_variance[0];
    for (std::size_t a = 0; a < 4; ++a) {
        EXPECT_NEAR(cov(a, a), r.explained_variance[a], 1e-8 * max_var);
        for (std::size_t b = 0; b < 4; ++b)
            if (a != b) EXPECT_LE(std::abs(cov(a, b)), 1e-6 * max_var);
    }
}

TEST(Pca, ProjectionIsCenteredTimesComponents) {
    gen::Rng rng(104);
    auto x = gen::normal_matrix(rng, 15, 4);
    auto r = pca(x, 2);
    for (std::size_t i = 0; i < 15; ++i)
        for (std::size_t c = 0; c < 2; ++c) {
            double s = 0.0;
            for (std::size_t j = 0; j < 4; ++j) s += (x(i, j) - r.mean[j]) * r.components(c, j);
            EXPECT_NEAR(r.projected(i, c), s, 1e-12);
        }
}

TEST(Pca, SignConventionLargestEntryPositive) {
    gen::Rng rng(105);
    auto r = pca(gen::normal_matrix(rng, 40, 7), 7);
    for (std::size_t c = 0; c < 7; ++c) {
        auto row = r.components.row(c);
        auto it = std::max_element(row.begin(), row.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
        EXPECT_GT(*it, 0.0);
    }
}

TEST(Pca, IsotropicDataHasNearlyEqualVariances) {
    gen::Rng rng(106);
    auto x = gen::normal_matrix(rng, 10000, 4);
    auto r = pca(x, 4);
    EXPECT_LT(r.explained_variance.front() / r.explained_variance.back(), 1.2);
}

TEST(Pca, Errors) {
    EXPECT_EQ(kind_of([] { pca(Matrix(1, 3), 1); }), ErrorKind::DegenerateInput);
    EXPECT_EQ(kind_of([] { pca(Matrix(4, 3), 4); }), ErrorKind::InvalidArgument);
    EXPECT_EQ(kind_of([] { pca(Matrix(4, 3), 0); }), ErrorKind::InvalidArgument);
    Matrix bad(3, 2, 1.0);
    bad(1, 1) = NAN;
    EXPECT_EQ(kind_of([&] { pca(bad, 1); }), ErrorKind::InvalidArgument);
    std::stop_source stop;
    stop.request_stop();
    gen::Rng rng(1);
    auto x = gen::normal_matrix(rng, 10, 3);
    EXPECT_EQ(kind_of([&] { pca(x, 2, {}, stop.get_token()); }), ErrorKind::Canceled);
}

TEST(Pca, ConvergenceFailureNamesComponent) {
    // Two nearly equal leading eigenvalues converge too slowly for a tiny budget.
    Matrix x(4, 2);
    x(0, 0) = 1; x(1, 0) = -1; x(2, 1) = 1.0000001; x(3, 1) = -1.0000001;
    try {
        pca(x, 1, PcaOptions{1e-10, 3});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ConvergenceFailure);
        EXPECT_EQ(e.subject(), "0");
    }
}

TEST(Pca, DuplicatedItemIsZeroVariance) {
    std::istringstream in("a 1 2 3\nb 4 5 6\n");
    auto s = load_space(in, "t");
    auto v = project_pca_view(s, {"a", "a"});
    EXPECT_EQ(v.view.axis_labels, (std::vector<std::string>{"PC1", "PC2"}));
    EXPECT_EQ(v.pca.explained_variance[0], 0.0);
    for (double c : v.view.coords.data()) EXPECT_EQ(c, 0.0);
}

TEST(Pca, ViewRowsFollowItemOrder) {
    gen::Rng rng(107);
    auto s = gen::random_space(rng, 30, 5);
    std::vector<std::string> items{"w0007", "w0003", "w0021", "w0011"};
    auto v = project_pca_view(s, items, 2);
    auto direct = pca(gather_rows(s, items), 2);
    EXPECT_EQ(v.view.items, items);
    EXPECT_EQ(v.view.coords, direct.projected);
}

// ---------------------------------------------------------------------------
// t-SNE

TEST(Tsne, SquareCornersJointSumsToOne) {
    Matrix x(4, 2);
    x(1, 0) = 1; x(2, 1) = 1; x(3, 0) = 1; x(3, 1) = 1;
    auto p = joint_probabilities(conditional_probabilities(squared_distances(x), 1.0));
    double sum = 0.0;
    for (double v : p.data()) sum += v;
    EXPECT_NEAR(sum, 1.0, 1e-12);
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_EQ(p(i, i), 0.0);
        for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(p(i, j), p(j, i));
    }
}

TEST(Tsne, RegularSimplexIsUniform) {
    Matrix x(5, 5);
    for (std::size_t i = 0; i < 5; ++i) x(i, i) = 1.0;
    std::vector<double> h;
    auto p = conditional_probabilities(squared_distances(x), 4.0, &h);
    for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = 0; j < 5; ++j) EXPECT_NEAR(p(i, j), i == j ? 0.0 : 0.25, 1e-12);
        EXPECT_NEAR(std::exp(oracle::entropy(p.row(i))), 4.0, 1e-3);
    }
}

TEST(Tsne, RowPerplexityMatchesTarget) {
    gen::Rng rng(201);
    for (double perp : {2.0, 5.0, 15.0, 30.0}) {
        auto x = gen::normal_matrix(rng, 100, 10);
        auto p = conditional_probabilities(squared_distances(x), perp);
        for (std::size_t i = 0; i < 100; ++i) {
            double s = 0.0;
            for (double v : p.row(i)) s += v;
            ASSERT_NEAR(s, 1.0, 1e-12);
            ASSERT_NEAR(std::exp(oracle::entropy(p.row(i))), perp, 1e-3) << "row " << i;
        }
        auto joint = joint_probabilities(p);
        double sum = 0.0;
        for (double v : joint.data()) sum += v;
        ASSERT_NEAR(sum, 1.0, 1e-12);
    }
}

TEST(Tsne, GradientMatchesCentralDifferences) {
    gen::Rng rng(202);
    for (int trial = 0; trial < 5; ++trial) {
        auto x = gen::normal_matrix(rng, 10, 5);
        auto p = joint_probabilities(conditional_probabilities(squared_distances(x), 3.0));
        auto y = gen::normal_matrix(rng, 10, 2);
        auto grad = kl_gradient(p, y);
        auto f = [&](const Matrix& yy) { return kl_divergence(p, yy); };
        for (std::size_t i = 0; i < y.data().size(); ++i) {
            const double fd = oracle::central_difference(f, y, i, 1e-5);
            const double g = grad.data()[i];
            ASSERT_LE(std::abs(g - fd), 1e-4 * std::max(std::abs(fd), 1e-3)) << "coordinate " << i;
        }
    }
}

TEST(Tsne, KlNonNegative) {
    gen::Rng rng(203);
    auto x = gen::normal_matrix(rng, 20, 3);
    auto p = joint_probabilities(conditional_probabilities(squared_distances(x), 5.0));
    for (int i = 0; i < 20; ++i) EXPECT_GE(kl_divergence(p, gen::normal_matrix(rng, 20, 2)), 0.0);
}

TEST(Tsne, TwoClustersAreSeparableAndKlMedianDecreases) {
    gen::Rng rng(204);
    std::vector<int> labels;
    auto x = two_clusters(rng, 100, 10, labels);
    TsneConfig cfg;
    cfg.kl_interval = 10;
    auto r = tsne(x, cfg);
    ASSERT_EQ(r.embedding.rows(), 100u);
    for (double v : r.embedding.data()) ASSERT_TRUE(std::isfinite(v));
    EXPECT_TRUE(oracle::perceptron_separates(r.embedding, labels));

    std::vector<double> post;
    for (const auto& s : r.kl_trace) {
        ASSERT_GE(s.kl, 0.0);
        if (s.iteration >= cfg.exaggeration_iterations && s.iteration % 10 == 0) post.push_back(s.kl);
    }
    ASSERT_GE(post.size(), 10u);
    double prev = INFINITY;
    for (std::size_t end = 5; end <= post.size(); ++end) {
        std::vector<double> window(post.begin() + std::ptrdiff_t(end - 5), post.begin() + std::ptrdiff_t(end));
        std::nth_element(window.begin(), window.begin() + 2, window.end());
        EXPECT_LE(window[2], prev + 1e-12) << "window ending at sample " << end;
        prev = window[2];
    }
}

TEST(Tsne, BitwiseDeterministic) {
    gen::Rng rng(205);
    auto x = gen::normal_matrix(rng, 40, 6);
    TsneConfig cfg;
    cfg.perplexity = 10;
    cfg.iterations = 300;
    auto a = tsne(x, cfg);
    auto b = tsne(x, cfg);
    ASSERT_EQ(a.embedding.data().size(), b.embedding.data().size());
    EXPECT_EQ(std::memcmp(a.embedding.data().data(), b.embedding.data().data(), a.embedding.data().size() * 8), 0);
    ASSERT_EQ(a.kl_trace.size(), b.kl_trace.size());
    for (std::size_t i = 0; i < a.kl_trace.size(); ++i) EXPECT_EQ(a.kl_trace[i].kl, b.kl_trace[i].kl);
    cfg.seed = 43;
    EXPECT_NE(tsne(x, cfg).embedding, a.embedding);
}

TEST(Tsne, Errors) {
    gen::Rng rng(206);
    auto x = gen::normal_matrix(rng, 20, 3);
    TsneConfig cfg;
    EXPECT_EQ(kind_of([&] { tsne(x, cfg); }), ErrorKind::InvalidPerplexity);  // 20 < 90
    cfg.perplexity = -1;
    EXPECT_EQ(kind_of([&] { tsne(x, cfg); }), ErrorKind::InvalidPerplexity);
    cfg.perplexity = 5;
    cfg.learning_rate = 1e308;
    cfg.exaggeration = 1e308;
    EXPECT_EQ(kind_of([&] { tsne(x, cfg); }), ErrorKind::NonFinite);
}

TEST(Tsne, CancelStopsAtNextIteration) {
    gen::Rng rng(207);
    auto x = gen::normal_matrix(rng, 30, 3);
    TsneConfig cfg;
    cfg.perplexity = 5;
    std::stop_source stop;
    std::size_t seen = 0;
    auto progress = [&](std::size_t it, std::size_t) {
        seen = it;
        if (it == 10) stop.request_stop();
    };
    EXPECT_EQ(kind_of([&] { tsne(x, cfg, stop.get_token(), progress); }), ErrorKind::Canceled);
    EXPECT_EQ(seen, 10u);
}

TEST(Tsne, ViewLabels) {
    gen::Rng rng(208);
    auto s = gen::random_space(rng, 20, 4);
    TsneConfig cfg;
    cfg.perplexity = 3;
    cfg.iterations = 50;
    auto v = project_tsne_view(s, s.labels(), cfg);
    EXPECT_EQ(v.view.axis_labels, (std::vector<std::string>{"TSNE1", "TSNE2"}));
    EXPECT_EQ(v.view.coords.rows(), 20u);
}
