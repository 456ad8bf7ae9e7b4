// Copyright 2026 The bolt Authors
// SPDX-License-Identifier: Apache-2.0
#include "bolt/acquire.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bolt/errors.hpp"

namespace bolt {

double expected_improvement(const PosteriorGaussian& post, double best) {
    const double var = std::max(post.var, 0.0);
    const double s = std::sqrt(var);
    const double diff = best - post.mean;
    if (s < 1e-12) return std::max(diff, 0.0);
    const double u = diff / s;
    return std::max(diff * normal_cdf(u) + s * normal_pdf(u), 0.0);
}

namespace {

LatentPoint encode_any(const Candidate& c) {
    if (const auto* plan = std::get_if<JoinPlan>(&c)) return encode_plan(*plan);
    return encode_seq(std::get<EditedSeq>(c).seq);
}

}  // namespace

std::vector<LatentPoint> propose_batch(const GPModel& model, const Trajectory& traj,
                                       const AcquisitionConfig& cfg, Rng& rng) {
    if (cfg.batch_size < 1 || cfg.pool_size < cfg.batch_size) {
        throw ConfigError("propose_batch: need pool_size >= batch_size >= 1");
    }
    if (cfg.local_fraction < 0.0 || cfg.local_fraction > 1.0) {
        throw ConfigError("propose_batch: local_fraction must be in [0,1]");
    }
    const auto best = incumbent(traj);
    if (!best) throw NoIncumbent("propose_batch: trajectory has no exact observation");

    std::vector<LatentPoint> anchors;
    for (const auto& [cand, value] : top_k(traj, 5)) anchors.push_back(encode_any(cand));

    const int d = model.dim();
    const int n_local = std::min(cfg.pool_size,
                                 static_cast<int>(cfg.local_fraction * cfg.pool_size));
    Eigen::MatrixXd pool(cfg.pool_size, d);
    for (int i = 0; i < cfg.pool_size; ++i) {
        if (i < n_local) {
            const LatentPoint& base = anchors[static_cast<std::size_t>(i) % anchors.size()];
            for (int j = 0; j < d; ++j) {
                const double v = base.coords[static_cast<std::size_t>(j)] +
                                 cfg.perturb_sigma * rng.normal();
                pool(i, j) = std::clamp(v, 0.0, 1.0);
            }
        } else {
            for (int j = 0; j < d; ++j) pool(i, j) = rng.uniform();
        }
    }

    const auto posts = posterior_many(model, pool);
    std::vector<double> ei(posts.size());
    for (std::size_t i = 0; i < posts.size(); ++i) ei[i] = expected_improvement(posts[i], *best);

    // Highest EI first; ties resolve by pool index so the result does not
    // depend on evaluation order.
    std::vector<int> idx(static_cast<std::size_t>(cfg.pool_size));
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&ei](int a, int b) {
        if (ei[static_cast<std::size_t>(a)] != ei[static_cast<std::size_t>(b)]) {
            return ei[static_cast<std::size_t>(a)] > ei[static_cast<std::size_t>(b)];
        }
        return a < b;
    });

    std::vector<LatentPoint> out;
    out.reserve(static_cast<std::size_t>(cfg.batch_size));
    for (int k = 0; k < cfg.batch_size; ++k) {
        const int i = idx[static_cast<std::size_t>(k)];
        LatentPoint z;
        z.coords.resize(static_cast<std::size_t>(d));
        for (int j = 0; j < d; ++j) z.coords[static_cast<std::size_t>(j)] = pool(i, j);
        out.push_back(std::move(z));
    }
    return out;
}

}  // namespace bolt
