#pragma once

#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "pbs/amm.hpp"
#include "pbs/market_data.hpp"
#include "pbs/types.hpp"

namespace pbs {

// Piecewise-linear schedule over within-slot time, clamped at the endpoints.
struct PiecewiseSchedule {
    std::vector<std::pair<double, double>> points;  // (t, value), t increasing

    double at(double t) const;
    static PiecewiseSchedule linear(double v0, double v12) {
        return {{{0.0, v0}, {12.0, v12}}};
    }
    friend bool operator==(const PiecewiseSchedule&, const PiecewiseSchedule&) = default;
};

struct SearcherConfig {
    std::string bot_id;
    std::string integrated_with;
    std::set<std::string> also_submits_to;
    double margin{0.18};  // extra fee demanded from non-integrated builders
    double reaction_latency{0.05};
    PiecewiseSchedule risk_discount{PiecewiseSchedule::linear(0.5, 0.05)};  // rho(t)
    std::vector<std::string> pools;
    double decision_rate{8.0};   // decisions per slot
    double decision_ramp{1.0};   // intensity multiplier slope over the slot
    double min_fee{1e-3};        // ETH; opportunities below are ignored
    double revert_tolerance{1e-3};
    bool fee_guard{true};  // integrated copy fails under other builders
    friend bool operator==(const SearcherConfig&, const SearcherConfig&) = default;
};

struct BuilderConfig {
    std::string builder_id;
    std::map<std::string, double> relay_latencies;  // relay_id -> seconds
    double resubmit_interval{0.25};
    PiecewiseSchedule retained_share{PiecewiseSchedule::linear(0.5, 0.02)};  // r(t)
    bool sees_public{true};
    double public_latency{0.05};   // mempool observation delay
    double direct_latency{0.01};   // private / exclusive delivery delay

    double latency_to(const std::string& relay_id) const {
        auto it = relay_latencies.find(relay_id);
        return it == relay_latencies.end() ? 0.01 : it->second;
    }
    friend bool operator==(const BuilderConfig&, const BuilderConfig&) = default;
};

struct UserFlowConfig {
    double swap_rate{20.0};      // public-intent arrivals per slot
    double private_rate{2.0};    // Private-channel arrivals per slot
    double transfer_share{0.3};  // of public-intent arrivals
    double failing_share{0.02};
    double misroute_prob{0.1};  // public-intent tx sent Exclusive instead
    std::string misroute_target;
    std::set<std::string> private_targets;
    size_t fallback_after_losses{2};  // Exclusive -> Public after k losing cycles
    double swap_size_eth_log_mean{-1.0};  // lognormal of the ETH-side size
    double swap_size_eth_log_sigma{1.0};
    double fee_min{1e-4};  // ETH, identical across builders per tx
    double fee_max{1e-3};
    double slippage_tolerance{0.005};
    std::vector<std::string> pools;
    friend bool operator==(const UserFlowConfig&, const UserFlowConfig&) = default;
};

// One arbitrage decision. The integrated copy and the shared non-integrated
// copy carry the same logical_id; fees are quantized so that
// fee_integrated / fee_other equals 1 + margin exactly in raw units.
struct SearcherDecision {
    std::optional<Transaction> integrated;
    std::optional<Transaction> others;  // one tx offered to every non-integrated target
};

// Quote toward one target builder; std::nullopt when the opportunity clears
// neither the no-arb band nor min_fee.
std::optional<Transaction> searcher_quote(const SearcherConfig& cfg, const PoolState& pool,
                                          double p_cex, double t, const std::string& target,
                                          const CexFrictions& fr = {}, uint64_t slot_id = 0,
                                          uint64_t seq = 0);

SearcherDecision searcher_decide(const SearcherConfig& cfg, const PoolState& pool, double p_cex,
                                 double t, const CexFrictions& fr = {}, uint64_t slot_id = 0,
                                 uint64_t seq = 0);

struct PackResult {
    std::vector<std::string> txs;  // greedy acceptance order
    Amount revenue;
    std::map<std::string, PoolState> final_pools;
};

// Greedy by descending fee offered to this builder, tie-broken by tx_id;
// a candidate is kept only if it replays Success on the running prefix
// (unless include_failed). Fees accrue on Success only.
PackResult builder_pack(const BuilderConfig& cfg, const std::string& builder_id,
                        std::vector<const Transaction*> pending,
                        const std::map<std::string, PoolState>& pools_at_start,
                        bool include_failed = false);

// bid = revenue * (1 - r(t)), floored to a raw unit, never negative.
Amount builder_bid(const BuilderConfig& cfg, Amount revenue, double t);

// Poisson user arrivals within [t, t+1), deterministic for a fixed rng state.
std::vector<Transaction> user_flow_step(const UserFlowConfig& cfg, std::mt19937_64& rng, double t,
                                        const std::map<std::string, PoolState>& pools,
                                        const std::vector<std::string>& builder_ids,
                                        uint64_t slot_id = 0);

}  // namespace pbs
