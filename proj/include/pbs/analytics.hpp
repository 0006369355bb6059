#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pbs/ols.hpp"
#include "pbs/types.hpp"

namespace pbs {

struct ChannelLabel {
    std::string tx_id;
    ChannelKind label{ChannelKind::Private};
    std::string builder;      // set when label == Exclusive
    size_t builder_count{0};  // distinct builders whose blocks contained it
    friend bool operator==(const ChannelLabel&, const ChannelLabel&) = default;
};

struct DelayRecord {
    std::string tx_id;
    uint64_t first_cycle{0};
    std::optional<uint64_t> inclusion_cycle;
    size_t cycles_present{0};
    std::vector<ChannelKind> status_sequence;  // one entry per cycle present
    bool delayed{false};
};

struct DelaySummary {
    std::vector<DelayRecord> records;
    size_t user_txs_observed{0};
    size_t user_txs_delayed{0};
    double delayed_share{0.0};
};

struct RevenueSplit {
    Amount total;
    Amount exclusive;
    Amount private_;
    Amount public_;
};

struct SimilarityMatrix {
    std::vector<std::string> builders;
    // row = builder whose latest block is the reference; entries in [0,1],
    // nullopt when the row builder has no non-empty block by t
    std::vector<std::vector<std::optional<double>>> entries;
};

struct SharingEvent {
    std::string tx_id;
    std::string origin_builder;
    std::string adopter_builder;
    double lag_s{0.0};
};

struct PanelRow {
    std::string tx_id;
    std::string block_id;
    uint64_t slot_id{0};
    std::string builder_id;
    int success{0};
    bool has_price{false};
    double p_norm{0.0};  // % deviation from the tx's cross-block mean price
    double time_since_prev_block{0.0};
    double position_index{0.0};
    bool bot_present{false};        // any bot tx in the block
    bool same_dir_bot_block{false};  // same direction as a bot on that pool,
                                     // in the bot's integrated builder's block
                                     // with the bot present
    bool opp_dir_bot_block{false};
};

// A bot arbitrage trade, re-derived from the dataset alone by simulating the
// swap at the slot-start pool state (which is where included arbs execute).
struct BotTrade {
    std::string tx_id;
    std::string bot_id;
    std::string pool_id;
    std::string pair;
    uint64_t slot_id{0};
    double time{0.0};  // wall-clock seconds
    SwapDirection direction{SwapDirection::QuoteForBase};
    double volume{0.0};     // base-token units
    double p_dex{0.0};      // quote per base
    double fee{0.0};        // ETH paid to the integrated builder
    double p_implied{0.0};
};

struct PerSecondRow {
    int64_t second{0};
    double mean_p_implied{0.0};
    double volume{0.0};
    std::string bot_id;
};

// Per-cycle channel classification: Public when a public mempool observation
// precedes the winning block, otherwise Exclusive when a single builder's
// blocks contain it, otherwise Private.
std::vector<ChannelLabel> classify_channels(const Dataset& d, uint64_t cycle);

// Winning-block fee revenue partitioned by channel label; components sum to
// the total exactly.
RevenueSplit revenue_attribution(const Dataset& d, uint64_t cycle);

DelaySummary delayed_transactions(const Dataset& d);

// Entry (A,B) = |A's latest block at t ∩ txs in any of B's blocks at t| /
// |A's latest block at t|.
SimilarityMatrix similarity_matrix(const Dataset& d, uint64_t cycle, double t);

// Transactions first seen only in one builder's blocks that appear in another
// builder's block at least one second later (wall time, cross-cycle).
std::vector<SharingEvent> sharing_events(const Dataset& d);

// One row per (swap tx, submission); p_norm is present only for swaps that
// succeed somewhere. `bot_builders` maps bot origin to its integrated builder.
std::vector<PanelRow> execution_panel(const Dataset& d,
                                      const std::map<std::string, std::string>& bot_builders);

// p_implied = p_dex + fee/volume for a DEX buy of the base token, minus for a
// sell. volume is in base-token units, prices in quote (ETH).
double implied_cex_price(double p_dex, double fee, double volume, SwapDirection dex_side);

// (p_diff, p_improvement_pct); higher is better for the bot on both sides.
std::pair<double, double> price_improvement(double p_implied, double p_benchmark,
                                            SwapDirection dex_side);

// All integrated-copy trades of one bot, derived from the dataset.
std::vector<BotTrade> bot_trades(const Dataset& d, const std::string& bot_id);

// Trades aggregated over (s-1, s], unweighted mean p_implied by default.
std::vector<PerSecondRow> per_second_bot_series(const Dataset& d, const std::string& bot_id,
                                                const std::string& pair_symbol,
                                                bool volume_weighted = false);

// p_implied on the benchmark price at offsets {-2,-1,0,+1,+2} plus constant.
RegressionResult benchmark_lag_regression(const std::vector<PerSecondRow>& series,
                                          const PriceTrace& trace);

// p_improvement on {time, bot dummy, piecewise-linear volume with knots at
// 50/100/150 ETH, constant}; degenerate (constant-zero) columns are dropped.
RegressionResult improvement_regression(const std::vector<double>& improvement,
                                        const std::vector<double>& time,
                                        const std::vector<int>& is_second_bot,
                                        const std::vector<double>& volume);

}  // namespace pbs
