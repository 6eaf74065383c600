#include "hbmut/engine.hpp"

#include "hbmut/driver_model.hpp"
#include "hbmut/errors.hpp"
#include "hbmut/rate_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hbmut {

std::string to_string(ModelKind kind) { return kind == ModelKind::rate ? "rate" : "driver"; }

ModelKind parse_model_kind(const std::string& name) {
    if (name == "rate") return ModelKind::rate;
    if (name == "driver") return ModelKind::driver;
    throw UsageError("unknown model '" + name + "'");
}

std::unique_ptr<GeneRateModel> make_model(ModelKind kind, const ModelConfig& config) {
    if (kind == ModelKind::rate) return std::make_unique<RateModel>();
    if (!config.lambda0) throw UsageError("the driver model needs lambda0");
    return std::make_unique<DriverModel>(*config.lambda0);
}

double log_likelihood(const MutationDataset& data, const ExposureCache& cache, std::span<const double> rates,
                      std::span<const double> alpha, std::span<const double> beta) {
    double ll = data.log_count_constant();
    for (std::size_t m = 0; m < alpha.size(); ++m) {
        const auto x = data.type_counts()[m];
        if (x > 0) ll += static_cast<double>(x) * std::log(alpha[m]);
    }
    for (std::size_t k = 0; k < beta.size(); ++k) {
        const auto x = data.sample_counts()[k];
        if (x > 0) ll += static_cast<double>(x) * std::log(beta[k]);
    }
    for (std::uint32_t g = 0; g < data.num_genes(); ++g) {
        const auto x = data.gene_count(g);
        if (x > 0) ll += static_cast<double>(x) * std::log(rates[g]);
        ll -= rates[g] * cache.exposure(g);
    }
    if (!std::isfinite(ll)) throw NumericalError("log-likelihood is not finite");
    return ll;
}

double log_likelihood(const MutationDataset& data, std::span<const double> rates, std::span<const double> alpha,
                      std::span<const double> beta) {
    auto cache = ExposureCache::rebuild(data, alpha, beta);
    return log_likelihood(data, cache, rates, alpha, beta);
}

namespace {

constexpr double kTargetAcceptance = 0.44;

void adapt_scale(double& scale, std::uint64_t tried, bool accepted) {
    const double step = std::pow(static_cast<double>(tried), -0.6);
    scale *= std::exp(step * ((accepted ? 1.0 : 0.0) - kTargetAcceptance));
    scale = std::clamp(scale, 1e-4, 10.0);
}

void recentre(std::vector<double>& effects) {
    std::vector<double> logs(effects.size());
    std::transform(effects.begin(), effects.end(), logs.begin(), [](double v) { return std::log(v); });
    const double mean = std::accumulate(logs.begin(), logs.end(), 0.0) / static_cast<double>(logs.size());
    for (std::size_t i = 0; i < effects.size(); ++i) effects[i] = std::exp(logs[i] - mean);
}

} // namespace

void update_effects(SweepContext& ctx, std::span<const double> rates) {
    if (ctx.config.fix_effects) return;
    const auto& data = ctx.data;
    auto& st = ctx.state;
    const auto M = data.num_types();
    const auto K = data.num_samples();
    const auto S = data.num_sample_sets();
    const bool adapting = ctx.config.adapt && ctx.iteration <= ctx.config.burn_in;
    const double total = static_cast<double>(data.total_count());
    // Change in the log prior when log effect i of n moves by eps and the
    // vector is re-centred: u'_j = u_j + eps (1[j = i] - 1/n).
    const double prior_precision =
        ctx.config.effect_prior_sd ? 1.0 / (*ctx.config.effect_prior_sd * *ctx.config.effect_prior_sd) : 0.0;
    auto log_prior_change = [&](double value, double eps, std::size_t n) {
        if (prior_precision == 0.0) return 0.0;
        const double u = std::log(value);
        return -0.5 * prior_precision * (2.0 * eps * u + eps * eps * (1.0 - 1.0 / static_cast<double>(n)));
    };

    // rate_weight[m*S + s] = sum over rows (g, m, s) of lambda_g T.
    std::vector<double> rate_weight(M * S, 0.0);
    for (const auto& r : data.coverage_rows())
        rate_weight[r.type * S + r.sample_set] += rates[r.gene] * static_cast<double>(r.coverage);

    // Type effects: Poisson mass P = sum_m alpha_m R_m.
    if (M > 1) {
        std::vector<double> R(M, 0.0);
        for (std::size_t m = 0; m < M; ++m)
            for (std::size_t s = 0; s < S; ++s) R[m] += rate_weight[m * S + s] * ctx.cache.set_beta_sum(s);
        const double inv_m = 1.0 / static_cast<double>(M);
        for (std::uint32_t m = 0; m < M; ++m) {
            double& scale = st.proposals.alpha_scale[m];
            const double eps = ctx.rng.normal(0.0, scale);
            ++st.proposals.alpha_tried[m];
            if (eps == 0.0) continue;
            double P = 0.0;
            for (std::size_t j = 0; j < M; ++j) P += st.alpha[j] * R[j];
            const double c = std::exp(-eps * inv_m);
            const double f = std::exp(eps);
            const double P_new = c * (P + (f - 1.0) * st.alpha[m] * R[m]);
            const double log_ratio =
                eps * static_cast<double>(data.type_counts()[m]) - eps * inv_m * total - (P_new - P) +
                log_prior_change(st.alpha[m], eps, M);
            const bool accept = log_ratio >= 0.0 || std::log(ctx.rng.uniform()) < log_ratio;
            if (accept) {
                ++st.proposals.alpha_accepted[m];
                const double old_value = st.alpha[m];
                ctx.cache.update_type_effect(data, m, old_value, old_value * f);
                ctx.cache.scale_type_effects(c);
                st.alpha[m] *= f;
                for (auto& a : st.alpha) a *= c;
            }
            if (adapting) adapt_scale(scale, st.proposals.alpha_tried[m], accept);
        }
        recentre(st.alpha);
    }

    // Sample effects: P = sum_k beta_k Z_k with Z_k = sum_{s contains k} sum_m alpha_m W[m,s].
    if (K > 1) {
        std::vector<double> Q(S, 0.0);
        for (std::size_t m = 0; m < M; ++m)
            for (std::size_t s = 0; s < S; ++s) Q[s] += st.alpha[m] * rate_weight[m * S + s];
        std::vector<double> Z(K, 0.0);
        for (std::uint32_t k = 0; k < K; ++k)
            for (auto s : data.sets_containing(k)) Z[k] += Q[s];
        const double inv_k = 1.0 / static_cast<double>(K);
        for (std::uint32_t k = 0; k < K; ++k) {
            double& scale = st.proposals.beta_scale[k];
            const double eps = ctx.rng.normal(0.0, scale);
            ++st.proposals.beta_tried[k];
            if (eps == 0.0) continue;
            double P = 0.0;
            for (std::size_t j = 0; j < K; ++j) P += st.beta[j] * Z[j];
            const double c = std::exp(-eps * inv_k);
            const double f = std::exp(eps);
            const double P_new = c * (P + (f - 1.0) * st.beta[k] * Z[k]);
            const double log_ratio =
                eps * static_cast<double>(data.sample_counts()[k]) - eps * inv_k * total - (P_new - P) +
                log_prior_change(st.beta[k], eps, K);
            const bool accept = log_ratio >= 0.0 || std::log(ctx.rng.uniform()) < log_ratio;
            if (accept) {
                ++st.proposals.beta_accepted[k];
                const double old_value = st.beta[k];
                ctx.cache.update_sample_effect(data, k, old_value, old_value * f);
                ctx.cache.scale_sample_effects(c);
                st.beta[k] *= f;
                for (auto& b : st.beta) b *= c;
            }
            if (adapting) adapt_scale(scale, st.proposals.beta_tried[k], accept);
        }
        recentre(st.beta);
    }
}

std::pair<double, double> gamma_conditional(std::span<const double> cluster_values, std::pair<double, double> prior) {
    double sum = 0.0;
    for (double v : cluster_values) sum += v;
    return {prior.first + static_cast<double>(cluster_values.size()), prior.second + sum};
}

void update_gamma(SweepContext& ctx) {
    if (ctx.config.fixed_gamma) {
        ctx.state.gamma = *ctx.config.fixed_gamma;
        return;
    }
    auto [shape, rate] = gamma_conditional(ctx.state.partition.values(), ctx.gamma_prior);
    ctx.state.gamma = ctx.rng.gamma(shape, rate);
}

// ---------------------------------------------------------------------------
// Chain

Chain::Chain(const MutationDataset& data, const ModelConfig& config, ModelKind kind, std::uint64_t chain_index)
    : data_(data), config_(config), model_(make_model(kind, config)), rng_(config.seed, chain_index) {
    config_.validate();
    const auto M = data.num_types();
    const auto K = data.num_samples();
    const double crude = data.crude_rate();
    if (!(crude > 0.0)) throw DataError("dataset has no coverage");
    gamma_prior_ = config_.resolved_gamma_prior(crude);

    state_.alpha.assign(M, 1.0);
    state_.beta.assign(K, 1.0);
    state_.gamma = config_.fixed_gamma ? *config_.fixed_gamma : 1.0 / crude;
    state_.proposals.alpha_scale.assign(M, config_.proposal_scales);
    state_.proposals.beta_scale.assign(K, config_.proposal_scales);
    state_.proposals.alpha_accepted.assign(M, 0);
    state_.proposals.alpha_tried.assign(M, 0);
    state_.proposals.beta_accepted.assign(K, 0);
    state_.proposals.beta_tried.assign(K, 0);
    cache_ = ExposureCache::rebuild(data_, state_.alpha, state_.beta);
    model_->initialize(data_, config_, cache_, state_);
}

SweepContext Chain::context() {
    return SweepContext{data_, config_, state_, cache_, rng_, gamma_prior_, iteration_};
}

void Chain::refresh_cache() { cache_ = ExposureCache::rebuild(data_, state_.alpha, state_.beta); }

std::vector<double> Chain::rates() const {
    std::vector<double> out(data_.num_genes());
    model_->rates(state_, out);
    return out;
}

void Chain::sweep() {
    ++iteration_;
    auto ctx = context();
    model_->update_gene_rates(ctx);
    const auto r = rates();
    update_effects(ctx, r);
    // Bound floating-point drift of the incrementally maintained exposures.
    if (iteration_ % 256 == 0) refresh_cache();
    update_gamma(ctx);
    model_->update_indicators(ctx);
}

TraceRecord Chain::snapshot() const {
    TraceRecord rec;
    rec.iteration = iteration_;
    rec.gamma = state_.gamma;
    rec.clusters = state_.partition.num_clusters();
    rec.alpha = state_.alpha;
    rec.beta = state_.beta;
    rec.lambda = rates();
    if (model_->kind() == ModelKind::driver) {
        rec.pi = state_.pi;
        rec.delta = state_.delta;
        rec.increment.assign(data_.num_genes(), 0.0);
        for (std::uint32_t g = 0; g < data_.num_genes(); ++g)
            if (state_.delta[g]) rec.increment[g] = state_.partition.value(state_.partition.cluster_of(g));
    }
    rec.log_likelihood = log_likelihood(data_, cache_, rec.lambda, rec.alpha, rec.beta);
    return rec;
}

Trace run_chain(const MutationDataset& data, const ModelConfig& config, ModelKind kind, std::uint64_t chain_index) {
    Chain chain(data, config, kind, chain_index);
    Trace trace;
    trace.model = kind;
    trace.num_genes = data.num_genes();
    if (kind == ModelKind::driver) trace.lambda0 = config.lambda0;
    trace.records.reserve(config.num_records());
    for (int it = 1; it <= config.iterations; ++it) {
        try {
            chain.sweep();
            if (it > config.burn_in && (it - config.burn_in) % config.thin == 0)
                trace.records.push_back(chain.snapshot());
        } catch (const NumericalError& e) {
            throw NumericalError("iteration " + std::to_string(it) + ": " + e.what());
        }
    }
    return trace;
}

} // namespace hbmut
