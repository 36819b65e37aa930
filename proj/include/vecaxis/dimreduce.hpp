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

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stop_token>
#include <string>
#include <vector>

#include "vecaxis/embedding_store.hpp"
#include "vecaxis/matrix.hpp"

namespace vecaxis {

/// Rows of `space` for `items`, in order. Throws UnknownLabel.
Matrix gather_rows(const EmbeddingSpace& space, std::span<const std::string> items);

// ---------------------------------------------------------------------------
// PCA
// ---------------------------------------------------------------------------

struct PcaOptions {
    double tolerance = 1e-10;
    std::size_t max_iterations = 10000;
};

struct PcaResult {
    Matrix components;                    // k x d, orthonormal rows
    std::vector<double> explained_variance;  // k, non-increasing
    Matrix projected;                     // n x k, (X - mean) * components^T
    Vector mean;                          // d
};

/// Sample covariance (divisor n - 1) of the rows of X.
Matrix sample_covariance(const Matrix& x, Vector* mean = nullptr);

/// Top-k principal components by power iteration with deflation. Each
/// component's largest-magnitude entry is made positive.
/// Throws DegenerateInput (n < 2), InvalidArgument (k out of range, non-finite
/// input), ConvergenceFailure (component index in subject), Canceled.
PcaResult pca(const Matrix& x, std::size_t k, const PcaOptions& options = {}, std::stop_token stop = {});

// ---------------------------------------------------------------------------
// t-SNE (exact)
// ---------------------------------------------------------------------------

struct TsneConfig {
    double perplexity = 30.0;
    std::size_t iterations = 1000;
    double learning_rate = 200.0;
    double initial_momentum = 0.5;
    double final_momentum = 0.8;
    std::size_t momentum_switch_iteration = 250;
    double exaggeration = 12.0;
    std::size_t exaggeration_iterations = 250;
    std::uint64_t seed = 42;
    double init_stddev = 1e-4;
    std::size_t kl_interval = 1;  // record KL every this many iterations
    bool adaptive_gains = true;
};

struct KlSample {
    std::size_t iteration;
    double kl;
};

struct TsneResult {
    Matrix embedding;  // n x 2
    std::vector<KlSample> kl_trace;
    TsneConfig config;
};

/// Pairwise squared Euclidean distances.
Matrix squared_distances(const Matrix& x);

/// Row-conditional neighbor distributions p(j|i) whose Shannon entropy
/// (natural log) matches ln(perplexity) within 1e-5, found by bisection on
/// the Gaussian precision (at most 100 steps per row). Diagonal is zero.
/// `entropies`, if given, receives the achieved entropy of each row.
Matrix conditional_probabilities(const Matrix& sq_distances, double perplexity,
                                 std::vector<double>* entropies = nullptr);

/// (P + P^T) / 2n, floored at 1e-12 off the diagonal and renormalized to sum 1.
Matrix joint_probabilities(const Matrix& conditional);

/// KL(P || Q) for the Student-t low-dimensional affinities of Y.
double kl_divergence(const Matrix& p, const Matrix& y);

/// Gradient of kl_divergence with respect to Y.
Matrix kl_gradient(const Matrix& p, const Matrix& y);

/// The checks tsne() performs before optimizing: InvalidPerplexity unless
/// 0 < perplexity and n >= 3 * perplexity; InvalidArgument for a non-positive
/// learning rate or KL interval.
void validate_tsne_config(std::size_t n, const TsneConfig& config);

using ProgressFn = std::function<void(std::size_t iteration, std::size_t total)>;

/// Requires n >= 3 * perplexity (InvalidPerplexity). Throws NonFinite with the
/// iteration in the message if the embedding diverges, Canceled when `stop`
/// is requested (checked every iteration).
TsneResult tsne(const Matrix& x, const TsneConfig& config, std::stop_token stop = {},
                const ProgressFn& progress = {});

// ---------------------------------------------------------------------------
// views over a space
// ---------------------------------------------------------------------------

struct LearnedView {
    std::vector<std::string> axis_labels;  // "PC1".. or "TSNE1", "TSNE2"
    std::vector<std::string> items;
    Matrix coords;
};

struct PcaView {
    LearnedView view;
    PcaResult pca;
};

struct TsneView {
    LearnedView view;
    TsneResult tsne;
};

PcaView project_pca_view(const EmbeddingSpace& space, std::vector<std::string> items, std::size_t k = 2,
                         std::stop_token stop = {});

TsneView project_tsne_view(const EmbeddingSpace& space, std::vector<std::string> items, const TsneConfig& config,
                           std::stop_token stop = {}, const ProgressFn& progress = {});

}  // namespace vecaxis
