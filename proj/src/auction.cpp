#include "pbs/auction.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "pbs/amm.hpp"

namespace pbs {

namespace {

// z-score of the 75th percentile of the standard normal.
constexpr double kZ75 = 0.6744897501960817;

double sample_sim_delay(const RelayConfig& cfg, std::mt19937_64& rng) {
    if (cfg.delay_median <= 0.0) return 0.0;
    const double mu = std::log(cfg.delay_median);
    const double sigma = cfg.delay_p75 > cfg.delay_median
                             ? std::log(cfg.delay_p75 / cfg.delay_median) / kZ75
                             : 0.0;
    std::normal_distribution<double> gauss(0.0, 1.0);
    return std::exp(mu + sigma * gauss(rng));
}

}  // namespace

BlockSubmission relay_admit(const RelayConfig& cfg, BlockSubmission submission,
                            std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    if (unif(rng) < cfg.optimistic_prob) {
        submission.optimistic = true;
        submission.made_available_at = submission.received_at;
    } else {
        submission.optimistic = false;
        submission.made_available_at = submission.received_at + sample_sim_delay(cfg, rng);
    }
    return submission;
}

Amount broadcast_top_bid(std::span<const BlockSubmission> submissions, double t) {
    Amount top;
    for (const auto& s : submissions)
        if (s.made_available_at <= t && s.bid > top) top = s.bid;
    return top;
}

std::optional<std::string> proposer_select(std::span<const BlockSubmission> submissions,
                                           double request_time) {
    const BlockSubmission* best = nullptr;
    for (const auto& s : submissions) {
        if (s.made_available_at > request_time) continue;
        if (!best || s.bid > best->bid ||
            (s.bid == best->bid && (s.received_at < best->received_at ||
                                    (s.received_at == best->received_at &&
                                     s.block_id < best->block_id))))
            best = &s;
    }
    if (!best) return std::nullopt;
    return best->block_id;
}

namespace {

struct SlotContext {
    const ScenarioConfig& scenario;
    uint64_t slot_id;
    std::vector<std::string> builder_ids;
    // tx_id -> builder_id -> arrival time at that builder
    std::unordered_map<std::string, std::map<std::string, double>> arrivals;
    std::vector<std::string> new_tx_ids;  // in creation order
};

void register_arrivals(SlotContext& ctx, const Transaction& tx, bool carried) {
    auto& per_builder = ctx.arrivals[tx.tx_id];
    for (const auto& b : ctx.scenario.builders) {
        double at;
        switch (tx.channel.kind) {
            case ChannelKind::Public:
                if (!b.sees_public) continue;
                at = carried ? 0.0 : tx.created_at + b.public_latency;
                break;
            case ChannelKind::Private:
            case ChannelKind::Exclusive:
                if (!tx.channel.builders.contains(b.builder_id)) continue;
                at = carried ? 0.0 : tx.created_at + b.direct_latency;
                break;
        }
        per_builder[b.builder_id] = at;
    }
}

}  // namespace

SlotTrace run_slot(const ScenarioConfig& scenario, uint64_t slot_id, CarryState& carry,
                   std::map<std::string, PoolState>& pools,
                   std::map<std::string, Transaction>& tx_table,
                   const std::map<std::string, PriceTrace>& traces, std::mt19937_64& rng) {
    SlotTrace trace;
    trace.slot_id = slot_id;
    trace.pool_states_at_slot_start = pools;

    SlotContext ctx{scenario, slot_id, {}, {}, {}};
    for (const auto& b : scenario.builders) ctx.builder_ids.push_back(b.builder_id);

    // Exclusive transactions that fell back to the public mempool at the end
    // of the previous cycle are announced at the top of this one.
    for (auto& p : carry.pending) {
        if (p.went_public && p.losing_cycles == scenario.user_flow.fallback_after_losses) {
            trace.mempool_events.push_back({p.tx.tx_id, "public", 0.0});
        }
        register_arrivals(ctx, p.tx, /*carried=*/true);
        trace.transactions.push_back(p.tx.tx_id);
    }

    // New user arrivals, one window per second.
    std::vector<Transaction> new_txs;
    for (int w = 0; w < 12; ++w) {
        auto batch = user_flow_step(scenario.user_flow, rng, static_cast<double>(w), pools,
                                    ctx.builder_ids, slot_id);
        for (auto& tx : batch) new_txs.push_back(std::move(tx));
    }

    // Searcher decisions: inhomogeneous Poisson via thinning, quotes against
    // the slot-start pool state and the latency-lagged CEX price.
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (const auto& bot : scenario.searchers) {
        const double base = bot.decision_rate / 12.0;
        const double lam_max = base * (1.0 + std::max(0.0, bot.decision_ramp));
        if (lam_max <= 0.0) continue;
        std::exponential_distribution<double> gap(lam_max);
        uint64_t seq = 0;
        for (double t = gap(rng); t < 12.0; t += gap(rng)) {
            const double lam = base * (1.0 + std::max(0.0, bot.decision_ramp) * t / 12.0);
            if (unif(rng) * lam_max > lam) continue;
            for (const auto& pool_id : bot.pools) {
                auto pit = pools.find(pool_id);
                if (pit == pools.end()) continue;
                auto trit = traces.find(pit->second.pair.symbol());
                if (trit == traces.end()) continue;
                const double obs_t = std::max(0.0, wall_time(slot_id, t - bot.reaction_latency));
                const double p_cex = price_at(trit->second, obs_t);
                auto decision = searcher_decide(bot, pit->second, p_cex, t, scenario.cex,
                                                slot_id, seq);
                if (decision.integrated) new_txs.push_back(std::move(*decision.integrated));
                if (decision.others) new_txs.push_back(std::move(*decision.others));
            }
            ++seq;
        }
    }

    for (auto& tx : new_txs) {
        if (tx.channel.kind == ChannelKind::Public)
            trace.mempool_events.push_back({tx.tx_id, "public", tx.created_at});
        register_arrivals(ctx, tx, /*carried=*/false);
        trace.transactions.push_back(tx.tx_id);
        ctx.new_tx_ids.push_back(tx.tx_id);
        tx_table[tx.tx_id] = tx;
    }
    std::sort(trace.transactions.begin(), trace.transactions.end());
    trace.transactions.erase(std::unique(trace.transactions.begin(), trace.transactions.end()),
                             trace.transactions.end());
    std::sort(trace.mempool_events.begin(), trace.mempool_events.end(),
              [](const MempoolEvent& a, const MempoolEvent& b) {
                  return a.timestamp != b.timestamp ? a.timestamp < b.timestamp
                                                    : a.tx_id < b.tx_id;
              });

    const bool skipped = scenario.skipped_slots.contains(slot_id);

    if (!skipped) {
        // Event schedule: builder resubmissions, top-bid broadcasts, proposer
        // request. Arrivals are folded in via per-builder arrival times.
        std::vector<AuctionEvent> events;
        uint64_t seq = 0;
        for (size_t bi = 0; bi < scenario.builders.size(); ++bi) {
            const auto& b = scenario.builders[bi];
            for (double t = b.resubmit_interval; t <= 12.0 + 1e-9; t += b.resubmit_interval)
                events.push_back({t, EventKind::BuilderSubmit, seq++, bi});
        }
        if (scenario.relay.broadcast_interval > 0.0)
            for (double t = scenario.relay.broadcast_interval; t <= 12.0 + 1e-9;
                 t += scenario.relay.broadcast_interval)
                events.push_back({t, EventKind::TopBidBroadcast, seq++, 0});
        events.push_back({scenario.proposer_request_time, EventKind::ProposerRequest, seq++, 0});
        std::sort(events.begin(), events.end());

        std::vector<Amount> last_bid(scenario.builders.size());
        std::vector<bool> has_submitted(scenario.builders.size(), false);
        std::vector<std::vector<std::string>> last_txs(scenario.builders.size());
        std::vector<uint64_t> sub_count(scenario.builders.size(), 0);

        for (const auto& ev : events) {
            if (ev.kind == EventKind::BuilderSubmit) {
                const auto& b = scenario.builders[ev.payload];
                std::vector<const Transaction*> visible;
                for (const auto& [tx_id, per_builder] : ctx.arrivals) {
                    auto it = per_builder.find(b.builder_id);
                    if (it == per_builder.end() || it->second > ev.time) continue;
                    visible.push_back(&tx_table.at(tx_id));
                }
                // arrival map is unordered; sort for a deterministic pack input
                std::sort(visible.begin(), visible.end(),
                          [](const Transaction* a, const Transaction* c) {
                              return a->tx_id < c->tx_id;
                          });
                PackResult packed = builder_pack(b, b.builder_id, visible, pools,
                                                 scenario.include_failed);
                const Amount bid = builder_bid(b, packed.revenue, ev.time);
                const bool changed = !has_submitted[ev.payload] || bid > last_bid[ev.payload] ||
                                     (bid == last_bid[ev.payload] &&
                                      packed.txs != last_txs[ev.payload]);
                if (bid < last_bid[ev.payload] || !changed) continue;

                BlockSubmission sub;
                std::ostringstream id;
                id << b.builder_id << '-' << slot_id << '-' << sub_count[ev.payload]++;
                sub.block_id = id.str();
                sub.slot_id = slot_id;
                sub.builder_id = b.builder_id;
                sub.received_at = ev.time + b.latency_to(scenario.relay.relay_id);
                sub.txs = packed.txs;
                sub.bid = bid;
                sub.revenue = packed.revenue;
                if (sub.received_at > 12.0) continue;  // next slot's problem
                sub = relay_admit(scenario.relay, std::move(sub), rng);
                trace.submissions.push_back(std::move(sub));
                last_bid[ev.payload] = bid;
                last_txs[ev.payload] = packed.txs;
                has_submitted[ev.payload] = true;
            } else if (ev.kind == EventKind::TopBidBroadcast) {
                (void)broadcast_top_bid(trace.submissions, ev.time);
            } else if (ev.kind == EventKind::ProposerRequest) {
                trace.winning_block = proposer_select(trace.submissions, ev.time);
            }
        }
    }

    // Apply the winning block and update the carry-over set.
    std::unordered_set<std::string> included;
    if (trace.winning_block) {
        const auto wit = std::find_if(trace.submissions.begin(), trace.submissions.end(),
                                      [&](const BlockSubmission& s) {
                                          return s.block_id == *trace.winning_block;
                                      });
        BlockReplayResult replay = replay_block(pools, *wit, tx_table);
        pools = replay.final_pools;
        for (const auto& tx_id : wit->txs) included.insert(tx_id);
    }

    CarryState next;
    auto consider_carry = [&](PendingUserTx p) {
        if (included.contains(p.tx.tx_id)) return;
        p.losing_cycles += 1;
        if (!p.went_public && p.tx.channel.kind == ChannelKind::Exclusive &&
            p.losing_cycles >= scenario.user_flow.fallback_after_losses) {
            p.went_public = true;
            p.losing_cycles = scenario.user_flow.fallback_after_losses;
            const Amount fee = p.tx.fee_offers.begin()->second;
            p.tx.channel = Channel::public_();
            p.tx.fee_offers.clear();
            for (const auto& b : ctx.builder_ids) p.tx.fee_offers[b] = fee;
            tx_table[p.tx.tx_id] = p.tx;
        }
        next.pending.push_back(std::move(p));
    };
    for (auto& p : carry.pending) consider_carry(std::move(p));
    for (const auto& tx_id : ctx.new_tx_ids) {
        const Transaction& tx = tx_table.at(tx_id);
        if (tx.origin != "user") continue;  // stale bot quotes are not carried
        consider_carry(PendingUserTx{tx, 0, false});
    }
    carry = std::move(next);

    return trace;
}

Dataset run_scenario(const ScenarioConfig& scenario) {
    Dataset d;
    d.meta.seed = scenario.seed;
    d.meta.config_digest = scenario.config_digest;

    std::set<std::string> pairs;
    std::map<std::string, TokenPair> pair_by_symbol;
    for (const auto& pool : scenario.pools) {
        pairs.insert(pool.pair.symbol());
        pair_by_symbol[pool.pair.symbol()] = pool.pair;
    }
    const double duration = static_cast<double>(scenario.slot_count) * 12.0 + 60.0;
    for (const auto& sym : pairs) {
        auto cit = scenario.prices.find(sym);
        const PriceSourceConfig src = cit == scenario.prices.end() ? PriceSourceConfig{}
                                                                   : cit->second;
        if (!src.file.empty()) {
            d.prices[sym] = load_price_csv(src.file, pair_by_symbol.at(sym));
        } else {
            d.prices[sym] = generate_gbm_trace(scenario.seed ^ fnv1a(sym), pair_by_symbol.at(sym),
                                               src.start_price, src.volatility, duration);
        }
    }

    std::map<std::string, PoolState> pools;
    for (const auto& pool : scenario.pools) pools[pool.pool_id] = pool;

    std::mt19937_64 rng(scenario.seed);
    CarryState carry;
    for (uint64_t s = 0; s < scenario.slot_count; ++s)
        d.slots.push_back(run_slot(scenario, s, carry, pools, d.transactions, d.prices, rng));
    return d;
}

}  // namespace pbs
