#include "pbs/agents.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pbs {

double PiecewiseSchedule::at(double t) const {
    if (points.empty()) return 0.0;
    if (t <= points.front().first) return points.front().second;
    if (t >= points.back().first) return points.back().second;
    for (size_t i = 1; i < points.size(); ++i) {
        if (t <= points[i].first) {
            const auto& [t0, v0] = points[i - 1];
            const auto& [t1, v1] = points[i];
            const double w = (t - t0) / (t1 - t0);
            return v0 + w * (v1 - v0);
        }
    }
    return points.back().second;
}

namespace {

struct QuoteCore {
    SwapIntent intent;
    std::string logical_id;
    double created_at;
    Amount fee_integrated;
    Amount fee_other;
};

std::optional<QuoteCore> compute_quote(const SearcherConfig& cfg, const PoolState& pool,
                                       double p_cex, double t, const CexFrictions& fr,
                                       uint64_t slot_id, uint64_t seq) {
    const ArbPlan plan = optimal_arb(pool, p_cex, fr);
    if (plan.volume <= 0.0 || plan.amount_in <= 0.0) return std::nullopt;

    const Amount in_amt = Amount::from_double(plan.amount_in);
    if (in_amt <= Amount{}) return std::nullopt;
    const SwapOutcome sim = execute_swap(pool, plan.direction, in_amt, Amount{});
    if (sim.status != SwapStatus::Success || sim.amount_out.is_zero()) return std::nullopt;

    // Profit from the fixed-point amounts the chain will actually see, so the
    // fee inverts back to p_cex exactly under zero risk discount.
    double v, p_dex, profit;
    if (plan.direction == SwapDirection::QuoteForBase) {
        v = sim.amount_out.to_double();
        p_dex = in_amt.to_double() / v;
        profit = v * (p_cex - p_dex);
    } else {
        v = in_amt.to_double();
        p_dex = sim.amount_out.to_double() / v;
        profit = v * (p_dex - p_cex);
    }
    if (profit <= 0.0) return std::nullopt;

    const double rho = std::clamp(cfg.risk_discount.at(t), 0.0, 1.0);
    const double target_fee = profit * (1.0 - rho);
    if (target_fee < cfg.min_fee) return std::nullopt;

    // Quantize so that fee_integrated / fee_other = (1e6 + m_ppm) / 1e6
    // exactly in raw units.
    const int64_t m_ppm = static_cast<int64_t>(std::llround(cfg.margin * 1e6));
    const Wide quantum = Wide(1'000'000) + m_ppm;
    const Wide n = Wide(Amount::from_double(target_fee).raw()) / quantum;
    if (n <= 0) return std::nullopt;

    QuoteCore core;
    core.fee_integrated = Amount::from_raw(static_cast<__int128>(n * quantum));
    core.fee_other = Amount::from_raw(static_cast<__int128>(n * 1'000'000));
    core.intent.pool_id = pool.pool_id;
    core.intent.direction = plan.direction;
    core.intent.amount_in = in_amt;
    const int64_t tol_ppb = static_cast<int64_t>(std::llround(cfg.revert_tolerance * 1e9));
    core.intent.min_amount_out = Amount::mul_div(sim.amount_out, Wide(1'000'000'000 - tol_ppb),
                                                 Wide(1'000'000'000));
    core.created_at = t;

    std::ostringstream payload;
    payload << cfg.bot_id << '|' << pool.pool_id << '|'
            << (plan.direction == SwapDirection::BaseForQuote ? "b4q" : "q4b") << '|'
            << in_amt.to_string() << '|' << slot_id << '|' << seq << '|' << t;
    core.logical_id = hash_hex(payload.str());
    return core;
}

Transaction make_bot_tx(const SearcherConfig& cfg, const QuoteCore& core, Amount fee,
                        const std::set<std::string>& targets, bool integrated) {
    Transaction tx;
    tx.logical_id = core.logical_id;
    tx.origin = cfg.bot_id;
    tx.kind = TxKind::SearcherSwap;
    tx.swap = core.intent;
    for (const auto& b : targets) tx.fee_offers[b] = fee;
    tx.channel = targets.size() == 1 ? Channel::exclusive(*targets.begin())
                                     : Channel::private_(targets);
    tx.created_at = core.created_at;
    if (integrated && cfg.fee_guard) tx.fee_guard = cfg.integrated_with;
    tx.tx_id = hash_hex(core.logical_id + "|" + fee.to_string() + "|" +
                        (integrated ? "i" : "o"));
    return tx;
}

}  // namespace

std::optional<Transaction> searcher_quote(const SearcherConfig& cfg, const PoolState& pool,
                                          double p_cex, double t, const std::string& target,
                                          const CexFrictions& fr, uint64_t slot_id, uint64_t seq) {
    auto core = compute_quote(cfg, pool, p_cex, t, fr, slot_id, seq);
    if (!core) return std::nullopt;
    const bool integrated = target == cfg.integrated_with;
    return make_bot_tx(cfg, *core, integrated ? core->fee_integrated : core->fee_other,
                       {target}, integrated);
}

SearcherDecision searcher_decide(const SearcherConfig& cfg, const PoolState& pool, double p_cex,
                                 double t, const CexFrictions& fr, uint64_t slot_id,
                                 uint64_t seq) {
    SearcherDecision out;
    auto core = compute_quote(cfg, pool, p_cex, t, fr, slot_id, seq);
    if (!core) return out;
    out.integrated = make_bot_tx(cfg, *core, core->fee_integrated, {cfg.integrated_with}, true);
    if (!cfg.also_submits_to.empty())
        out.others = make_bot_tx(cfg, *core, core->fee_other, cfg.also_submits_to, false);
    return out;
}

PackResult builder_pack(const BuilderConfig& cfg, const std::string& builder_id,
                        std::vector<const Transaction*> pending,
                        const std::map<std::string, PoolState>& pools_at_start,
                        bool include_failed) {
    std::erase_if(pending, [&](const Transaction* tx) {
        return !tx->fee_offers.contains(builder_id);
    });
    std::sort(pending.begin(), pending.end(), [&](const Transaction* a, const Transaction* b) {
        const Amount fa = a->fee_offers.at(builder_id);
        const Amount fb = b->fee_offers.at(builder_id);
        if (fa != fb) return fa > fb;
        return a->tx_id < b->tx_id;
    });

    PackResult result;
    result.final_pools = pools_at_start;
    for (const Transaction* tx : pending) {
        bool success = false;
        if (tx->kind == TxKind::Failing || (tx->fee_guard && *tx->fee_guard != builder_id)) {
            success = false;
        } else if (tx->kind == TxKind::Transfer) {
            success = true;
        } else if (tx->swap) {
            auto it = result.final_pools.find(tx->swap->pool_id);
            if (it != result.final_pools.end()) {
                SwapOutcome o = execute_swap(it->second, tx->swap->direction, tx->swap->amount_in,
                                             tx->swap->min_amount_out);
                if (o.status == SwapStatus::Success) {
                    it->second = o.new_state;
                    success = true;
                }
            }
        }
        if (success) {
            result.txs.push_back(tx->tx_id);
            result.revenue += tx->fee_offers.at(builder_id);
        } else if (include_failed) {
            result.txs.push_back(tx->tx_id);
        }
    }
    return result;
}

Amount builder_bid(const BuilderConfig& cfg, Amount revenue, double t) {
    if (revenue <= Amount{}) return Amount{};
    const double r = std::clamp(cfg.retained_share.at(t), 0.0, 1.0);
    const int64_t keep_ppb = static_cast<int64_t>(std::llround((1.0 - r) * 1e9));
    return Amount::mul_div(revenue, Wide(keep_ppb), Wide(1'000'000'000));
}

std::vector<Transaction> user_flow_step(const UserFlowConfig& cfg, std::mt19937_64& rng, double t,
                                        const std::map<std::string, PoolState>& pools,
                                        const std::vector<std::string>& builder_ids,
                                        uint64_t slot_id) {
    std::vector<Transaction> out;
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    auto draw_count = [&](double rate_per_slot) {
        if (rate_per_slot <= 0.0) return 0L;
        std::poisson_distribution<long> pois(rate_per_slot / 12.0);
        return pois(rng);
    };

    auto make_tx = [&](Channel channel, size_t seq) {
        Transaction tx;
        tx.created_at = t + unif(rng);
        tx.origin = "user";
        const double kind_draw = unif(rng);
        std::uniform_real_distribution<double> fee_dist(cfg.fee_min, cfg.fee_max);
        const Amount fee = Amount::from_double(fee_dist(rng));

        if (kind_draw < cfg.failing_share) {
            tx.kind = TxKind::Failing;
        } else if (kind_draw < cfg.failing_share + cfg.transfer_share) {
            tx.kind = TxKind::Transfer;
        } else {
            tx.kind = TxKind::UserSwap;
            SwapIntent intent;
            if (!cfg.pools.empty()) {
                std::uniform_int_distribution<size_t> pick(0, cfg.pools.size() - 1);
                intent.pool_id = cfg.pools[pick(rng)];
            }
            auto pit = pools.find(intent.pool_id);
            std::normal_distribution<double> gauss(0.0, 1.0);
            const double size_eth =
                std::exp(cfg.swap_size_eth_log_mean + cfg.swap_size_eth_log_sigma * gauss(rng));
            intent.direction = unif(rng) < 0.5 ? SwapDirection::BaseForQuote
                                               : SwapDirection::QuoteForBase;
            if (pit != pools.end()) {
                const double spot = quote_marginal_price(pit->second);
                const double in_units = intent.direction == SwapDirection::QuoteForBase
                                            ? size_eth
                                            : size_eth / spot;
                intent.amount_in = Amount::from_double(in_units);
                const SwapOutcome quoted =
                    execute_swap(pit->second, intent.direction, intent.amount_in, Amount{});
                if (quoted.status == SwapStatus::Success) {
                    const int64_t tol_ppb =
                        static_cast<int64_t>(std::llround(cfg.slippage_tolerance * 1e9));
                    intent.min_amount_out = Amount::mul_div(
                        quoted.amount_out, Wide(1'000'000'000 - tol_ppb), Wide(1'000'000'000));
                } else {
                    tx.kind = TxKind::Failing;  // unexecutable even at slot start
                }
            } else {
                tx.kind = TxKind::Transfer;  // no pool to trade on
            }
            if (tx.kind == TxKind::UserSwap) tx.swap = intent;
        }

        tx.channel = channel;
        if (channel.kind == ChannelKind::Public || channel.kind == ChannelKind::Private) {
            for (const auto& b : builder_ids) tx.fee_offers[b] = fee;
        } else {
            tx.fee_offers[*channel.builders.begin()] = fee;
        }

        std::ostringstream payload;
        payload << "user|" << slot_id << '|' << t << '|' << seq << '|' << tx.created_at;
        tx.logical_id = hash_hex(payload.str());
        tx.tx_id = hash_hex(tx.logical_id + "|tx");
        return tx;
    };

    size_t seq = 0;
    const long n_public = draw_count(cfg.swap_rate);
    for (long i = 0; i < n_public; ++i) {
        Channel ch = Channel::public_();
        if (!cfg.misroute_target.empty() && unif(rng) < cfg.misroute_prob)
            ch = Channel::exclusive(cfg.misroute_target);
        out.push_back(make_tx(ch, seq++));
    }
    const long n_private = cfg.private_targets.empty() ? 0 : draw_count(cfg.private_rate);
    for (long i = 0; i < n_private; ++i)
        out.push_back(make_tx(Channel::private_(cfg.private_targets), seq++));

    return out;
}

}  // namespace pbs
