// Copyright 2026 The bolt Authors
// SPDX-License-Identifier: Apache-2.0
#include "bolt/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bolt/errors.hpp"

namespace bolt {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454836;
constexpr double kEmRelTol = 1e-3;  // times y_scale
constexpr int kEmMaxIters = 20;

const double kLengthscaleFactors[] = {0.05, 0.1, 0.2, 0.5, 1.0, 2.0};
const double kNoiseGrid[] = {1e-4, 1e-3, 1e-2, 1e-1};

Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& X) {
    const Eigen::VectorXd sq = X.rowwise().squaredNorm();
    Eigen::MatrixXd D = sq.replicate(1, X.rows());
    D += sq.transpose().replicate(X.rows(), 1);
    D.noalias() -= 2.0 * X * X.transpose();
    return D.cwiseMax(0.0);
}

struct Factorization {
    Eigen::MatrixXd L;
    double jitter = 0.0;
};

// Escalating jitter: none, then 1e-8 growing x10 up to 1e-4.
Factorization robust_cholesky(const Eigen::MatrixXd& K) {
    static const double kJitters[] = {0.0, 1e-8, 1e-7, 1e-6, 1e-5, 1e-4};
    for (double jitter : kJitters) {
        Eigen::MatrixXd Kj = K;
        if (jitter > 0.0) Kj.diagonal().array() += jitter;
        Eigen::LLT<Eigen::MatrixXd> llt(Kj);
        if (llt.info() == Eigen::Success) {
            return {Eigen::MatrixXd(llt.matrixL()), jitter};
        }
    }
    throw DegenerateData("Cholesky factorization failed even with jitter 1e-4");
}

double lml_from_factors(const Eigen::MatrixXd& L, const Eigen::VectorXd& alpha,
                        const Eigen::VectorXd& y) {
    const double n = static_cast<double>(y.size());
    return -0.5 * y.dot(alpha) - L.diagonal().array().log().sum() - 0.5 * n * kLogTwoPi;
}

void check_finite(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    if (!X.allFinite() || !y.allFinite()) {
        throw NonFiniteInput("fit: inputs must be finite");
    }
}

Eigen::MatrixXd to_matrix(const std::vector<LatentPoint>& X) {
    if (X.empty()) throw DegenerateData("fit: need at least one point");
    Eigen::MatrixXd M(static_cast<Eigen::Index>(X.size()), X[0].dim());
    for (std::size_t i = 0; i < X.size(); ++i) {
        if (X[i].dim() != X[0].dim()) {
            throw DimensionMismatch("fit: points must share one dimension");
        }
        for (int j = 0; j < X[0].dim(); ++j) M(static_cast<Eigen::Index>(i), j) = X[i].coords[static_cast<std::size_t>(j)];
    }
    return M;
}

GPModel assemble(const Eigen::MatrixXd& X, const Eigen::VectorXd& ys, const KernelParams& params,
                 double y_mean, double y_scale, const Eigen::MatrixXd& D) {
    Eigen::MatrixXd K =
        (params.signal_var * (-D / (2.0 * params.lengthscale * params.lengthscale)).array().exp())
            .matrix();
    K.diagonal().array() += params.noise_var;
    Factorization f = robust_cholesky(K);
    GPModel model;
    model.X = X;
    model.y_std = ys;
    model.params = params;
    model.chol_lower = f.L;
    model.jitter = f.jitter;
    model.alpha = f.L.triangularView<Eigen::Lower>().solve(ys);
    model.alpha =
        f.L.transpose().triangularView<Eigen::Upper>().solve(Eigen::VectorXd(model.alpha));
    model.y_mean = y_mean;
    model.y_scale = y_scale;
    return model;
}

}  // namespace

GPModel fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    if (X.rows() < 1 || X.rows() != y.size()) {
        throw DimensionMismatch("fit: |X| must equal |y| and be >= 1");
    }
    check_finite(X, y);

    const double y_mean = y.mean();
    double y_scale = std::sqrt((y.array() - y_mean).square().mean());
    if (!(y_scale > 1e-12)) y_scale = 1.0;  // degenerate data: constant targets
    const Eigen::VectorXd ys = (y.array() - y_mean) / y_scale;

    const Eigen::MatrixXd D = squared_distances(X);
    const double scale = std::sqrt(static_cast<double>(X.cols()));

    double best_lml = -std::numeric_limits<double>::infinity();
    KernelParams best_params;
    for (double factor : kLengthscaleFactors) {
        for (double noise : kNoiseGrid) {
            KernelParams params{factor * scale, 1.0, noise};
            Eigen::MatrixXd K =
                ((-D / (2.0 * params.lengthscale * params.lengthscale)).array().exp()).matrix();
            K.diagonal().array() += noise;
            Factorization f = robust_cholesky(K);
            Eigen::VectorXd alpha = f.L.triangularView<Eigen::Lower>().solve(ys);
            alpha = f.L.transpose().triangularView<Eigen::Upper>().solve(Eigen::VectorXd(alpha));
            const double lml = lml_from_factors(f.L, alpha, ys);
            if (lml > best_lml) {
                best_lml = lml;
                best_params = params;
            }
        }
    }
    return assemble(X, ys, best_params, y_mean, y_scale, D);
}

GPModel fit(const std::vector<LatentPoint>& X, const std::vector<double>& y) {
    return fit(to_matrix(X), Eigen::Map<const Eigen::VectorXd>(y.data(),
                                                               static_cast<Eigen::Index>(y.size())));
}

GPModel fit_with_params(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                        const KernelParams& params, bool standardize) {
    if (X.rows() < 1 || X.rows() != y.size()) {
        throw DimensionMismatch("fit_with_params: |X| must equal |y| and be >= 1");
    }
    check_finite(X, y);
    if (!(params.lengthscale > 0.0) || !(params.signal_var > 0.0) || params.noise_var < 0.0) {
        throw ConfigError("fit_with_params: kernel parameters must be positive");
    }
    double y_mean = 0.0;
    double y_scale = 1.0;
    if (standardize) {
        y_mean = y.mean();
        y_scale = std::sqrt((y.array() - y_mean).square().mean());
        if (!(y_scale > 1e-12)) y_scale = 1.0;
    }
    const Eigen::VectorXd ys = (y.array() - y_mean) / y_scale;
    return assemble(X, ys, params, y_mean, y_scale, squared_distances(X));
}

PosteriorGaussian posterior(const GPModel& model, const Eigen::VectorXd& x) {
    if (x.size() != model.dim()) {
        throw DimensionMismatch("posterior: query dimension " + std::to_string(x.size()) +
                                " != model dimension " + std::to_string(model.dim()));
    }
    const double two_l2 = 2.0 * model.params.lengthscale * model.params.lengthscale;
    Eigen::VectorXd ks =
        (model.params.signal_var *
         (-(model.X.rowwise() - x.transpose()).rowwise().squaredNorm() / two_l2).array().exp())
            .matrix();
    const double mean_std = ks.dot(model.alpha);
    const Eigen::VectorXd v = model.chol_lower.triangularView<Eigen::Lower>().solve(ks);
    const double var_std = std::max(model.params.signal_var - v.squaredNorm(), 0.0);
    return {model.y_mean + model.y_scale * mean_std, var_std * model.y_scale * model.y_scale};
}

PosteriorGaussian posterior(const GPModel& model, const LatentPoint& x) {
    return posterior(model, Eigen::Map<const Eigen::VectorXd>(
                                x.coords.data(), static_cast<Eigen::Index>(x.coords.size())));
}

std::vector<PosteriorGaussian> posterior_many(const GPModel& model, const Eigen::MatrixXd& Xq) {
    if (Xq.cols() != model.dim()) {
        throw DimensionMismatch("posterior_many: query dimension mismatch");
    }
    const Eigen::Index m = Xq.rows();
    const Eigen::Index n = model.size();
    const double two_l2 = 2.0 * model.params.lengthscale * model.params.lengthscale;
    // Kq(i, j) = k(train_i, query_j)
    Eigen::MatrixXd Kq(n, m);
    const Eigen::VectorXd train_sq = model.X.rowwise().squaredNorm();
    const Eigen::VectorXd query_sq = Xq.rowwise().squaredNorm();
    Kq = train_sq.replicate(1, m);
    Kq += query_sq.transpose().replicate(n, 1);
    Kq.noalias() -= 2.0 * model.X * Xq.transpose();
    Kq = (model.params.signal_var * (-Kq.cwiseMax(0.0) / two_l2).array().exp()).matrix();

    const Eigen::VectorXd means = Kq.transpose() * model.alpha;
    const Eigen::MatrixXd V = model.chol_lower.triangularView<Eigen::Lower>().solve(Kq);
    std::vector<PosteriorGaussian> out(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) {
        const double var_std = std::max(model.params.signal_var - V.col(i).squaredNorm(), 0.0);
        out[static_cast<std::size_t>(i)] = {model.y_mean + model.y_scale * means(i),
                                            var_std * model.y_scale * model.y_scale};
    }
    return out;
}

double log_marginal_likelihood(const GPModel& model) {
    return lml_from_factors(model.chol_lower, model.alpha, model.y_std);
}

double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * 3.141592653589793238462643383279502884);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double truncated_normal_mean(double mean, double var, double lower) {
    if (var <= 1e-300) return std::max(mean, lower);
    const double s = std::sqrt(var);
    const double a = (lower - mean) / s;
    if (a < -35.0) return mean;  // truncation does not bind
    if (a > 35.0) return lower + s / a;  // deep-truncation asymptote
    const double tail = 0.5 * std::erfc(a / std::sqrt(2.0));
    if (tail <= 0.0) return lower + s / std::max(a, 1.0);
    const double hazard = normal_pdf(a) / tail;
    return mean + s * hazard;
}

CensoredTarget to_censored_target(const Outcome& o) {
    if (const auto* e = std::get_if<Exact>(&o)) return CensoredTarget::exact(e->value);
    return CensoredTarget::at_tau(std::get<Censored>(o).tau);
}

GPModel fit_censored(const Eigen::MatrixXd& X, const std::vector<CensoredTarget>& y,
                     CensoredFitDiag* diag) {
    if (X.rows() != static_cast<Eigen::Index>(y.size())) {
        throw DimensionMismatch("fit_censored: |X| must equal |y|");
    }
    std::vector<Eigen::Index> censored;
    Eigen::VectorXd values(static_cast<Eigen::Index>(y.size()));
    int n_exact = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        values(static_cast<Eigen::Index>(i)) = y[i].value;
        if (y[i].censored) {
            censored.push_back(static_cast<Eigen::Index>(i));
        } else {
            ++n_exact;
        }
    }
    if (n_exact == 0) throw NoExactData("fit_censored: need at least one exact observation");
    if (diag) {
        diag->iterations = 0;
        diag->imputed.clear();
        diag->taus.clear();
        for (Eigen::Index c : censored) diag->taus.push_back(values(c));
    }
    if (censored.empty()) return fit(X, values);  // the EM loop is vacuous

    std::vector<double> taus;
    for (Eigen::Index c : censored) taus.push_back(values(c));

    // Initial imputation sits at tau; each E step imputes from the model's
    // leave-one-out posterior (latent, noise-free) truncated below at tau, so
    // a censored point never pins itself to its current imputation.
    GPModel model = fit(X, values);
    for (int iter = 1; iter <= kEmMaxIters; ++iter) {
        // diag(K^-1) and alpha give the standardized LOO posterior per point:
        //   mu_i = y_i - alpha_i / beta_i, var_i = 1 / beta_i - noise.
        const Eigen::MatrixXd Linv =
            model.chol_lower.triangularView<Eigen::Lower>().solve(
                Eigen::MatrixXd::Identity(model.size(), model.size()));
        double delta = 0.0;
        std::vector<double> next(censored.size());
        for (std::size_t k = 0; k < censored.size(); ++k) {
            const Eigen::Index i = censored[k];
            const double beta = Linv.col(i).squaredNorm();
            const double mu_std = model.y_std(i) - model.alpha(i) / beta;
            const double var_std =
                std::max(1.0 / beta - (model.params.noise_var + model.jitter), 1e-12);
            const double mu = model.y_mean + model.y_scale * mu_std;
            const double var = var_std * model.y_scale * model.y_scale;
            double imputed = truncated_normal_mean(mu, var, taus[k]);
            imputed = std::max(imputed, taus[k]);
            delta = std::max(delta, std::abs(imputed - values(i)));
            next[k] = imputed;
        }
        for (std::size_t k = 0; k < censored.size(); ++k) values(censored[k]) = next[k];
        model = fit(X, values);
        if (diag) {
            diag->iterations = iter;
            diag->imputed.push_back(next);
        }
        if (delta < kEmRelTol * model.y_scale) break;
    }
    return model;
}

GPModel fit_censored(const std::vector<LatentPoint>& X, const std::vector<CensoredTarget>& y,
                     CensoredFitDiag* diag) {
    return fit_censored(to_matrix(X), y, diag);
}

}  // namespace bolt
