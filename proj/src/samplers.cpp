#include "dppost/samplers.hpp"

#include "dppost/constraints.hpp"
#include "dppost/errors.hpp"
#include "dppost/mechanisms.hpp"
#include "dppost/truncated_normal.hpp"

#include <cmath>
#include <stdexcept>

namespace dppost {

void ChainConfig::validate() const {
    if (n_draws < 1) {
        throw std::invalid_argument("chain config: n_draws must be at least 1");
    }
    if (thin < 1) {
        throw std::invalid_argument("chain config: thin must be at least 1");
    }
}

TruncatedGaussianGibbs::TruncatedGaussianGibbs(std::span<const double> center, double sd,
                                               const ConstraintSystem& cs)
    : center_(center.begin(), center.end()), sd_(sd), cs_(cs), rows_by_column_(cs.dimension()) {
    validate_dimensions(center.size(), cs);
    if (!(sd > 0.0) || !std::isfinite(sd)) {
        throw std::invalid_argument("gibbs: sd must be positive and finite");
    }
    for (std::size_t k = 0; k < cs.rows(); ++k) {
        for (std::size_t j = 0; j < cs.dimension(); ++j) {
            if (cs.matrix()(k, j) != 0.0) {
                rows_by_column_[j].push_back(k);
            }
        }
    }
}

bool TruncatedGaussianGibbs::rows_hold(std::size_t j, std::span<const double> y) const {
    for (std::size_t k : rows_by_column_[j]) {
        const double v = cs_.row_value(k, y);
        if (!(v >= cs_.lower()[k] && v <= cs_.upper()[k])) {
            return false;
        }
    }
    return true;
}

void TruncatedGaussianGibbs::update(std::size_t j, std::vector<double>& y, RandomStream& rng) const {
    const Interval iv = coordinate_interval_unchecked(j, y, cs_);
    double x = sample_truncated_normal(center_[j], sd_, iv.low, iv.high, rng);
    if (iv.low < iv.high) {
        const double width = iv.width();
        if (x == iv.low && std::isfinite(iv.low)) {
            const double step = std::isfinite(width) ? 1e-12 * width : 1e-12 * std::max(1.0, std::fabs(iv.low));
            x = iv.low + step;
        } else if (x == iv.high && std::isfinite(iv.high)) {
            const double step = std::isfinite(width) ? 1e-12 * width : 1e-12 * std::max(1.0, std::fabs(iv.high));
            x = iv.high - step;
        }
    }
    const double previous = y[j];
    y[j] = x;
    if (rows_hold(j, y)) {
        return;
    }
    for (int i = 0; i < 64; ++i) {
        y[j] = previous + 0.5 * (y[j] - previous);
        if (rows_hold(j, y)) {
            return;
        }
    }
    y[j] = previous;
}

void TruncatedGaussianGibbs::sweep(std::vector<double>& y, RandomStream& rng) const {
    for (std::size_t j = 0; j < y.size(); ++j) {
        update(j, y, rng);
    }
}

PosteriorDraws gibbs_tmvn(const NoisyMeasurement& z, const ConstraintSystem& cs, double sigma,
                          const ChainConfig& cfg) {
    cfg.validate();
    validate_dimensions(z.size(), cs);
    if (z.mechanism().family() != MechanismFamily::Gaussian) {
        throw std::invalid_argument("gibbs_tmvn: measurement was not produced by a Gaussian mechanism");
    }
    const TruncatedGaussianGibbs kernel(z.values(), sigma, cs);
    RandomStream rng(cfg.seed);
    std::vector<double> y = find_feasible_start(z.values(), cs);

    for (std::size_t s = 0; s < cfg.burn_in; ++s) {
        kernel.sweep(y, rng);
    }
    const std::size_t m = y.size();
    std::vector<double> out;
    out.reserve(cfg.n_draws * m);
    for (std::size_t i = 0; i < cfg.n_draws; ++i) {
        for (std::size_t t = 0; t < cfg.thin; ++t) {
            kernel.sweep(y, rng);
        }
        out.insert(out.end(), y.begin(), y.end());
    }
    return PosteriorDraws(cfg.n_draws, m, std::move(out), cfg.burn_in, 1.0, cfg.seed, z.stratum());
}

PosteriorDraws rejection_sample(const NoisyMeasurement& z, const ConstraintSystem& cs, const ChainConfig& cfg,
                                std::size_t max_attempts) {
    cfg.validate();
    validate_dimensions(z.size(), cs);
    RandomStream rng(cfg.seed);
    const auto& mech = z.mechanism();
    const std::size_t m = z.size();
    std::vector<double> y(m);
    std::vector<double> out;
    out.reserve(cfg.n_draws * m);
    std::size_t kept = 0;
    std::size_t attempts = 0;
    while (kept < cfg.n_draws) {
        if (attempts == max_attempts) {
            throw AcceptanceTooLow(kept, attempts);
        }
        ++attempts;
        for (std::size_t i = 0; i < m; ++i) {
            const double noise = mech.family() == MechanismFamily::Gaussian ? mech.scale() * rng.normal()
                                                                             : rng.laplace(mech.scale());
            y[i] = z.values()[i] + noise;
        }
        if (is_feasible(y, cs, 0.0)) {
            out.insert(out.end(), y.begin(), y.end());
            ++kept;
        }
    }
    const double rate = static_cast<double>(kept) / static_cast<double>(attempts);
    return PosteriorDraws(kept, m, std::move(out), 0, rate, cfg.seed, z.stratum());
}

double log_acceptance_ratio(double log_target_proposed, double log_proposal_proposed, double log_target_current,
                            double log_proposal_current) noexcept {
    return (log_target_proposed - log_proposal_proposed) - (log_target_current - log_proposal_current);
}

constexpr std::size_t kProposalWarmupSweeps = 100;

PosteriorDraws mh_independence(const NoisyMeasurement& z, const ConstraintSystem& cs,
                               const IndependenceMhOptions& options, const ChainConfig& cfg) {
    cfg.validate();
    validate_dimensions(z.size(), cs);
    if (!(options.target_scale > 0.0) || !std::isfinite(options.target_scale)) {
        throw std::invalid_argument("mh: target scale must be positive and finite");
    }
    if (options.refresh_sweeps < 1) {
        throw std::invalid_argument("mh: refresh_sweeps must be at least 1");
    }
    const auto zv = z.values();
    const TruncatedGaussianGibbs proposal(zv, options.proposal_sd, cs);
    RandomStream rng(cfg.seed);

    auto log_target = [&](std::span<const double> y) {
        return log_likelihood(options.target_family, options.target_scale, zv, y);
    };
    auto log_proposal = [&](std::span<const double> y) {
        return log_likelihood(MechanismFamily::Gaussian, options.proposal_sd, zv, y);
    };

    // Start from a proposal draw: a repaired start can sit deep in the proposal
    // tail, where its importance weight is so large the chain never moves.
    std::vector<double> candidate = find_feasible_start(zv, cs);
    for (std::size_t s = 0; s < kProposalWarmupSweeps; ++s) {
        proposal.sweep(candidate, rng);
    }
    std::vector<double> current = candidate;
    double lt_cur = log_target(current);
    double lp_cur = log_proposal(current);

    std::size_t accepted = 0;
    std::size_t post_burn_steps = 0;
    const std::size_t m = current.size();
    std::vector<double> out;
    out.reserve(cfg.n_draws * m);

    auto step = [&](bool counting) {
        for (std::size_t s = 0; s < options.refresh_sweeps; ++s) {
            proposal.sweep(candidate, rng);
        }
        const double lt_new = log_target(candidate);
        const double lp_new = log_proposal(candidate);
        const double log_ratio = log_acceptance_ratio(lt_new, lp_new, lt_cur, lp_cur);
        const bool accept = std::log(rng.uniform()) < log_ratio;
        if (accept) {
            current = candidate;
            lt_cur = lt_new;
            lp_cur = lp_new;
        }
        if (counting) {
            ++post_burn_steps;
            accepted += accept ? 1 : 0;
        }
    };

    for (std::size_t s = 0; s < cfg.burn_in; ++s) {
        step(false);
    }
    for (std::size_t i = 0; i < cfg.n_draws; ++i) {
        for (std::size_t t = 0; t < cfg.thin; ++t) {
            step(true);
        }
        out.insert(out.end(), current.begin(), current.end());
    }
    const double rate = static_cast<double>(accepted) / static_cast<double>(post_burn_steps);
    return PosteriorDraws(cfg.n_draws, m, std::move(out), cfg.burn_in, rate, cfg.seed, z.stratum());
}

PosteriorDraws mh_laplace(const NoisyMeasurement& z, const ConstraintSystem& cs, double lambda,
                          const ChainConfig& cfg, std::size_t refresh_sweeps) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("mh_laplace: lambda must be positive and finite");
    }
    IndependenceMhOptions options;
    options.target_family = MechanismFamily::Laplace;
    options.target_scale = lambda;
    options.proposal_sd = std::sqrt(kl_matched_gaussian_variance(lambda));
    options.refresh_sweeps = refresh_sweeps;
    return mh_independence(z, cs, options, cfg);
}

PosteriorDraws sample_posterior(const NoisyMeasurement& z, const ConstraintSystem& cs, const ChainConfig& cfg,
                                std::size_t refresh_sweeps) {
    const auto& mech = z.mechanism();
    if (mech.family() == MechanismFamily::Gaussian) {
        return gibbs_tmvn(z, cs, mech.scale(), cfg);
    }
    return mh_laplace(z, cs, mech.scale(), cfg, refresh_sweeps);
}

}  // namespace dppost
