// Copyright 2026 The bolt Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "bolt/rng.hpp"
#include "bolt/surrogate.hpp"

namespace bolt {

struct AcquisitionConfig {
    int pool_size = 512;
    double local_fraction = 0.5;  // share of the pool perturbed around incumbents
    double perturb_sigma = 0.1;
    int batch_size = 5;
};

// Expected improvement for minimization. With s = sqrt(var) and
// u = (best - mean) / s:  EI = (best - mean) * Phi(u) + s * phi(u).
// Degenerate s < 1e-12 collapses to max(best - mean, 0).
double expected_improvement(const PosteriorGaussian& post, double best);

// Candidate pool = local_fraction * pool_size Gaussian perturbations of the
// trajectory's current top-5 latent points (clamped to [0,1]) plus uniform
// random points for the remainder; returns the batch_size pool members with
// highest EI against the incumbent, ties broken by pool index.
std::vector<LatentPoint> propose_batch(const GPModel& model, const Trajectory& traj,
                                       const AcquisitionConfig& cfg, Rng& rng);

}  // namespace bolt
