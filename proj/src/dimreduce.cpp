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

#include "vecaxis/dimreduce.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "vecaxis/error.hpp"

namespace vecaxis {

namespace {

void check_stop(const std::stop_token& stop) {
    if (stop.stop_requested()) throw Error(ErrorKind::Canceled, "computation canceled");
}

void check_finite(const Matrix& x, const char* what) {
    for (double v : x.data()) {
        if (!std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, std::string(what) + " has non-finite entries");
    }
}

// Removes the components of `v` along each (unit) row of `basis[0..count)`.
void orthogonalize(std::span<double> v, const Matrix& basis, std::size_t count) {
    for (std::size_t c = 0; c < count; ++c) {
        auto b = basis.row(c);
        const double proj = dot(v, b);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= proj * b[i];
    }
}

double normalize_in_place(std::span<double> v) {
    const double n = norm(v);
    if (n > 0.0) {
        for (double& x : v) x /= n;
    }
    return n;
}

}  // namespace

Matrix gather_rows(const EmbeddingSpace& space, std::span<const std::string> items) {
    Matrix x(items.size(), space.dimension());
    for (std::size_t i = 0; i < items.size(); ++i) {
        auto v = space.lookup(items[i]);
        std::copy(v.begin(), v.end(), x.row(i).begin());
    }
    return x;
}

// ---------------------------------------------------------------------------
// PCA

Matrix sample_covariance(const Matrix& x, Vector* mean_out) {
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    Vector mean(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) mean[j] += x(i, j);
    }
    for (double& m : mean) m /= static_cast<double>(n);

    Matrix cov(d, d);
    Vector centered(d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) centered[j] = x(i, j) - mean[j];
        for (std::size_t a = 0; a < d; ++a) {
            const double ca = centered[a];
            for (std::size_t b = a; b < d; ++b) cov(a, b) += ca * centered[b];
        }
    }
    const double denom = static_cast<double>(n - 1);
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = a; b < d; ++b) {
            cov(a, b) /= denom;
            cov(b, a) = cov(a, b);
        }
    }
    if (mean_out) *mean_out = std::move(mean);
    return cov;
}

PcaResult pca(const Matrix& x, std::size_t k, const PcaOptions& options, std::stop_token stop) {
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    if (n < 2) throw Error(ErrorKind::DegenerateInput, "PCA needs at least 2 rows, got " + std::to_string(n));
    if (k == 0 || k > std::min(n, d)) {
        throw Error(ErrorKind::InvalidArgument, "PCA component count must be in [1, min(n, d)] = [1, " +
                                                    std::to_string(std::min(n, d)) + "], got " + std::to_string(k));
    }
    check_finite(x, "PCA input");

    PcaResult result;
    const Matrix cov = sample_covariance(x, &result.mean);
    Matrix deflated = cov;
    double trace = 0.0;
    for (std::size_t j = 0; j < d; ++j) trace += cov(j, j);
    // Below this |Av| the remaining spectrum is numerically zero and any unit
    // vector orthogonal to the found components is an eigenvector.
    const double zero_floor = 1e-13 * std::max(trace, std::numeric_limits<double>::min());

    Matrix components(k, d);
    std::vector<double> variances(k);
    Vector v(d);
    Vector w(d);

    for (std::size_t c = 0; c < k; ++c) {
        std::mt19937_64 rng(0x9e3779b97f4a7c15ULL + c);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (double& e : v) e = gauss(rng);
        orthogonalize(v, components, c);
        normalize_in_place(v);

        bool converged = false;
        double prev_change = std::numeric_limits<double>::quiet_NaN();
        for (std::size_t it = 0; it < options.max_iterations; ++it) {
            if ((it & 63) == 0) check_stop(stop);
            for (std::size_t a = 0; a < d; ++a) w[a] = dot(deflated.row(a), v);
            orthogonalize(w, components, c);
            if (norm(w) <= zero_floor) {
                converged = true;
                break;
            }
            normalize_in_place(w);

            double plus = 0.0;
            double minus = 0.0;
            for (std::size_t a = 0; a < d; ++a) {
                plus += (w[a] - v[a]) * (w[a] - v[a]);
                minus += (w[a] + v[a]) * (w[a] + v[a]);
            }
            const double change = std::sqrt(std::min(plus, minus));
            std::swap(v, w);

            // change / (1 - rate) bounds the distance still to travel when the
            // error contracts geometrically at `rate`.
            double rate = std::isnan(prev_change) || prev_change == 0.0 ? 0.0 : change / prev_change;
            rate = std::clamp(rate, 0.0, 0.9999);
            if (change / (1.0 - rate) < options.tolerance) {
                converged = true;
                break;
            }
            prev_change = change;
        }
        if (!converged) {
            throw Error(ErrorKind::ConvergenceFailure,
                        "power iteration did not converge for component " + std::to_string(c))
                .about(std::to_string(c));
        }

        // Deterministic sign: largest-magnitude entry positive.
        std::size_t arg = 0;
        for (std::size_t a = 1; a < d; ++a) {
            if (std::abs(v[a]) > std::abs(v[arg])) arg = a;
        }
        if (v[arg] < 0.0) {
            for (double& e : v) e = -e;
        }

        for (std::size_t a = 0; a < d; ++a) w[a] = dot(cov.row(a), v);
        const double lambda = dot(v, w);
        std::copy(v.begin(), v.end(), components.row(c).begin());
        variances[c] = lambda;

        for (std::size_t a = 0; a < d; ++a) {
            for (std::size_t b = 0; b < d; ++b) deflated(a, b) -= lambda * v[a] * v[b];
        }
    }

    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return variances[a] > variances[b]; });
    result.components = Matrix(k, d);
    result.explained_variance.resize(k);
    for (std::size_t c = 0; c < k; ++c) {
        auto src = components.row(order[c]);
        std::copy(src.begin(), src.end(), result.components.row(c).begin());
        result.explained_variance[c] = variances[order[c]];
    }

    result.projected = Matrix(n, k);
    Vector centered(d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) centered[j] = x(i, j) - result.mean[j];
        for (std::size_t c = 0; c < k; ++c) result.projected(i, c) = dot(centered, result.components.row(c));
    }
    return result;
}

// ---------------------------------------------------------------------------
// t-SNE

Matrix squared_distances(const Matrix& x) {
    const std::size_t n = x.rows();
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < x.cols(); ++k) {
                const double diff = x(i, k) - x(j, k);
                s += diff * diff;
            }
            out(i, j) = s;
            out(j, i) = s;
        }
    }
    return out;
}

Matrix conditional_probabilities(const Matrix& sq, double perplexity, std::vector<double>* entropies) {
    const std::size_t n = sq.rows();
    if (!(perplexity > 0.0) || !std::isfinite(perplexity)) {
        throw Error(ErrorKind::InvalidPerplexity, "perplexity must be positive and finite");
    }
    const double target = std::log(perplexity);
    constexpr double kTolerance = 1e-5;
    constexpr int kMaxSteps = 100;

    Matrix p(n, n);
    if (entropies) entropies->assign(n, 0.0);
    std::vector<double> row(n);

    for (std::size_t i = 0; i < n; ++i) {
        double dmin = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) dmin = std::min(dmin, sq(i, j));
        }
        if (n == 1) break;

        // Entropy of the row for precision beta; distances shifted by dmin so
        // the largest weight is exactly 1.
        auto evaluate = [&](double beta) {
            double sum = 0.0;
            double weighted = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) {
                    row[j] = 0.0;
                    continue;
                }
                const double shifted = sq(i, j) - dmin;
                row[j] = std::exp(-beta * shifted);
                sum += row[j];
                weighted += row[j] * shifted;
            }
            for (std::size_t j = 0; j < n; ++j) row[j] /= sum;
            return std::log(sum) + beta * weighted / sum;
        };

        double beta = 1.0;
        double lo = 0.0;
        double hi = std::numeric_limits<double>::infinity();
        double entropy = evaluate(beta);
        for (int step = 0; step < kMaxSteps && std::abs(entropy - target) > kTolerance; ++step) {
            if (entropy > target) {
                lo = beta;
                beta = std::isinf(hi) ? beta * 2.0 : 0.5 * (beta + hi);
            } else {
                hi = beta;
                beta = 0.5 * (beta + lo);
            }
            entropy = evaluate(beta);
        }
        std::copy(row.begin(), row.end(), p.row(i).begin());
        if (entropies) (*entropies)[i] = entropy;
    }
    return p;
}

Matrix joint_probabilities(const Matrix& conditional) {
    const std::size_t n = conditional.rows();
    constexpr double kFloor = 1e-12;
    Matrix p(n, n);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double v = (conditional(i, j) + conditional(j, i)) / (2.0 * static_cast<double>(n));
            p(i, j) = std::max(v, kFloor);
            sum += p(i, j);
        }
    }
    for (double& v : p.data()) v /= sum;
    return p;
}

namespace {

// Student-t kernel values num(i, j) = 1 / (1 + |y_i - y_j|^2) and their sum.
double student_kernel(const Matrix& y, Matrix& num) {
    const std::size_t n = y.rows();
    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num(i, i) = 0.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = y(i, 0) - y(j, 0);
            const double dy = y(i, 1) - y(j, 1);
            const double v = 1.0 / (1.0 + dx * dx + dy * dy);
            num(i, j) = v;
            num(j, i) = v;
            z += 2.0 * v;
        }
    }
    return z;
}

// Gradient for affinities scale * P; optionally returns KL(P || Q) for the
// unscaled P from the same kernel evaluation.
void gradient_step(const Matrix& p, double scale, const Matrix& y, Matrix& num, Matrix& grad, double* kl) {
    const std::size_t n = y.rows();
    const double z = student_kernel(y, num);
    double kl_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double gx = 0.0;
        double gy = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double q = num(i, j) / z;
            const double mult = (scale * p(i, j) - q) * num(i, j);
            gx += mult * (y(i, 0) - y(j, 0));
            gy += mult * (y(i, 1) - y(j, 1));
            if (kl && p(i, j) > 0.0) kl_sum += p(i, j) * std::log(p(i, j) / q);
        }
        grad(i, 0) = 4.0 * gx;
        grad(i, 1) = 4.0 * gy;
    }
    if (kl) *kl = kl_sum;
}

void check_embedding_shape(const Matrix& p, const Matrix& y) {
    if (y.cols() != 2 || p.rows() != y.rows() || p.cols() != y.rows()) {
        throw Error(ErrorKind::InvalidArgument, "expected an n x n affinity matrix and an n x 2 embedding");
    }
}

}  // namespace

double kl_divergence(const Matrix& p, const Matrix& y) {
    check_embedding_shape(p, y);
    Matrix num(y.rows(), y.rows());
    Matrix grad(y.rows(), 2);
    double kl = 0.0;
    gradient_step(p, 1.0, y, num, grad, &kl);
    return kl;
}

Matrix kl_gradient(const Matrix& p, const Matrix& y) {
    check_embedding_shape(p, y);
    Matrix num(y.rows(), y.rows());
    Matrix grad(y.rows(), 2);
    gradient_step(p, 1.0, y, num, grad, nullptr);
    return grad;
}

void validate_tsne_config(std::size_t n, const TsneConfig& config) {
    if (!(config.perplexity > 0.0) || !std::isfinite(config.perplexity)) {
        throw Error(ErrorKind::InvalidPerplexity, "perplexity must be positive and finite");
    }
    if (static_cast<double>(n) < 3.0 * config.perplexity) {
        throw Error(ErrorKind::InvalidPerplexity, "t-SNE needs n >= 3 * perplexity (n = " + std::to_string(n) +
                                                      ", perplexity = " + std::to_string(config.perplexity) + ")");
    }
    if (!(config.learning_rate > 0.0) || config.kl_interval == 0) {
        throw Error(ErrorKind::InvalidArgument, "learning rate and KL interval must be positive");
    }
}

TsneResult tsne(const Matrix& x, const TsneConfig& config, std::stop_token stop, const ProgressFn& progress) {
    const std::size_t n = x.rows();
    validate_tsne_config(n, config);
    check_finite(x, "t-SNE input");

    const Matrix p = joint_probabilities(conditional_probabilities(squared_distances(x), config.perplexity));

    TsneResult result;
    result.config = config;
    Matrix& y = result.embedding;
    y = Matrix(n, 2);
    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> gauss(0.0, config.init_stddev);
    for (double& v : y.data()) v = gauss(rng);

    Matrix num(n, n);
    Matrix grad(n, 2);
    Matrix update(n, 2);
    Matrix gains(n, 2, 1.0);
    constexpr double kMinGain = 0.01;

    for (std::size_t it = 0; it < config.iterations; ++it) {
        check_stop(stop);
        const double momentum = it < config.momentum_switch_iteration ? config.initial_momentum : config.final_momentum;
        const double scale = it < config.exaggeration_iterations ? config.exaggeration : 1.0;
        const bool record = it % config.kl_interval == 0 || it + 1 == config.iterations;

        // With scale != 1 the KL of the true P comes from a second pass.
        double kl = 0.0;
        gradient_step(p, scale, y, num, grad, record && scale == 1.0 ? &kl : nullptr);
        if (record && scale != 1.0) {
            Matrix scratch(n, 2);
            gradient_step(p, 1.0, y, num, scratch, &kl);
        }
        if (record) result.kl_trace.push_back({it, kl});

        for (std::size_t k = 0; k < y.data().size(); ++k) {
            double& g = gains.data()[k];
            const double gk = grad.data()[k];
            double& u = update.data()[k];
            if (config.adaptive_gains) {
                g = (gk > 0.0) != (u > 0.0) ? g + 0.2 : g * 0.8;
                g = std::max(g, kMinGain);
            }
            u = momentum * u - config.learning_rate * g * gk;
            y.data()[k] += u;
        }

        double mx = 0.0;
        double my = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            mx += y(i, 0);
            my += y(i, 1);
        }
        mx /= static_cast<double>(n);
        my /= static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            y(i, 0) -= mx;
            y(i, 1) -= my;
            if (!std::isfinite(y(i, 0)) || !std::isfinite(y(i, 1))) {
                throw Error(ErrorKind::NonFinite, "t-SNE embedding diverged at iteration " + std::to_string(it))
                    .about(std::to_string(it));
            }
        }
        if (progress) progress(it + 1, config.iterations);
    }
    return result;
}

// ---------------------------------------------------------------------------
// views

PcaView project_pca_view(const EmbeddingSpace& space, std::vector<std::string> items, std::size_t k,
                         std::stop_token stop) {
    PcaView out;
    out.pca = pca(gather_rows(space, items), k, {}, std::move(stop));
    for (std::size_t c = 0; c < k; ++c) out.view.axis_labels.push_back("PC" + std::to_string(c + 1));
    out.view.items = std::move(items);
    out.view.coords = out.pca.projected;
    return out;
}

TsneView project_tsne_view(const EmbeddingSpace& space, std::vector<std::string> items, const TsneConfig& config,
                           std::stop_token stop, const ProgressFn& progress) {
    TsneView out;
    out.tsne = tsne(gather_rows(space, items), config, std::move(stop), progress);
    out.view.axis_labels = {"TSNE1", "TSNE2"};
    out.view.items = std::move(items);
    out.view.coords = out.tsne.embedding;
    return out;
}

}  // namespace vecaxis
