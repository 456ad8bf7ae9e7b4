// Copyright 2026 The bolt Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "bolt/core.hpp"

namespace bolt {

struct KernelParams {
    double lengthscale = 1.0;
    double signal_var = 1.0;
    double noise_var = 1e-4;
    bool operator==(const KernelParams&) const = default;
};

struct PosteriorGaussian {
    double mean = 0.0;
    double var = 0.0;
};

// Exact GP regression with an RBF kernel over standardized targets:
//   k(x, x') = signal_var * exp(-|x - x'|^2 / (2 * lengthscale^2))
struct GPModel {
    Eigen::MatrixXd X;           // training points, one row per point
    Eigen::VectorXd y_std;       // standardized targets
    KernelParams params;
    Eigen::MatrixXd chol_lower;  // L with L L^T = K + noise I (+ jitter)
    Eigen::VectorXd alpha;       // (K + noise I)^{-1} y_std
    double jitter = 0.0;
    double y_mean = 0.0;
    double y_scale = 1.0;        // clamped to 1 when all targets are identical

    int dim() const { return static_cast<int>(X.cols()); }
    int size() const { return static_cast<int>(X.rows()); }
};

// Fits hyperparameters by maximizing the log marginal likelihood over a fixed
// grid: lengthscale in {0.05, 0.1, 0.2, 0.5, 1, 2} * sqrt(d), noise in
// {1e-4, 1e-3, 1e-2, 1e-1}, signal fixed to 1 on standardized targets.
// Deterministic given its inputs.
GPModel fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);
GPModel fit(const std::vector<LatentPoint>& X, const std::vector<double>& y);

// Fit with fixed hyperparameters (no grid search). With standardize=false the
// targets are used as-is, which pins closed-form values in tests.
GPModel fit_with_params(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                        const KernelParams& params, bool standardize = true);

// Standard GP predictive mean/variance of the latent function (noise-free),
// de-standardized back to the original target units.
PosteriorGaussian posterior(const GPModel& model, const Eigen::VectorXd& x);
PosteriorGaussian posterior(const GPModel& model, const LatentPoint& x);

// Posterior at many query points (rows of Xq) in one pass.
std::vector<PosteriorGaussian> posterior_many(const GPModel& model, const Eigen::MatrixXd& Xq);

// Exact Gaussian log marginal likelihood of the standardized targets.
double log_marginal_likelihood(const GPModel& model);

// Target for fit_censored: an exact value, or the censoring threshold tau.
struct CensoredTarget {
    double value = 0.0;  // exact value, or tau when censored
    bool censored = false;

    static CensoredTarget exact(double v) { return {v, false}; }
    static CensoredTarget at_tau(double tau) { return {tau, true}; }
};

CensoredTarget to_censored_target(const Outcome& o);

struct CensoredFitDiag {
    int iterations = 0;
    std::vector<double> taus;                  // one per censored point
    std::vector<std::vector<double>> imputed;  // per iteration, per censored point
};

// EM-style handling of right-censored targets. Each iteration imputes every
// censored value with the mean of the model's leave-one-out posterior at that
// point truncated below at tau, then refits on exact + imputed values. Starts
// from imputation = tau and stops when max |delta imputed| < 1e-3 * y_scale or
// after 20 iterations. With zero censored points this is exactly fit().
GPModel fit_censored(const Eigen::MatrixXd& X, const std::vector<CensoredTarget>& y,
                     CensoredFitDiag* diag = nullptr);
GPModel fit_censored(const std::vector<LatentPoint>& X, const std::vector<CensoredTarget>& y,
                     CensoredFitDiag* diag = nullptr);

// Mean of a normal(mean, var) truncated below at `lower`; always >= lower
// when the truncation binds.
double truncated_normal_mean(double mean, double var, double lower);

double normal_pdf(double x);
double normal_cdf(double x);

}  // namespace bolt
