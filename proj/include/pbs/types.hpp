#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pbs/amount.hpp"

namespace pbs {

// Prices are quoted as quote-per-base throughout.
struct TokenPair {
    std::string base;
    std::string quote;

    std::string symbol() const { return base + "-" + quote; }
    friend bool operator==(const TokenPair&, const TokenPair&) = default;
};

enum class TxKind { UserSwap, SearcherSwap, Transfer, Failing };

enum class SwapDirection { BaseForQuote, QuoteForBase };

enum class ChannelKind { Public, Private, Exclusive };

// Delivery channel: Public goes to the mempool, Private to a chosen set of
// builders, Exclusive to exactly one.
struct Channel {
    ChannelKind kind{ChannelKind::Public};
    std::set<std::string> builders;  // empty for Public

    static Channel public_() { return {ChannelKind::Public, {}}; }
    static Channel exclusive(std::string builder) { return {ChannelKind::Exclusive, {std::move(builder)}}; }
    static Channel private_(std::set<std::string> bs) { return {ChannelKind::Private, std::move(bs)}; }
    friend bool operator==(const Channel&, const Channel&) = default;
};

struct SwapIntent {
    std::string pool_id;
    SwapDirection direction{SwapDirection::BaseForQuote};
    Amount amount_in;
    Amount min_amount_out;
    friend bool operator==(const SwapIntent&, const SwapIntent&) = default;
};

struct Transaction {
    std::string tx_id;
    std::string logical_id;  // stable across per-builder fee variants
    std::string origin;
    TxKind kind{TxKind::Transfer};
    std::optional<SwapIntent> swap;
    std::map<std::string, Amount> fee_offers;  // builder_id -> fee in ETH
    Channel channel;
    double created_at{0.0};  // seconds within slot
    // When set, the transaction fails in any block whose builder differs.
    std::optional<std::string> fee_guard;

    friend bool operator==(const Transaction&, const Transaction&) = default;
};

// The block-terminal payment from builder to proposer; never counted as a
// transaction in any statistic.
struct BidTransaction {
    std::string builder_id;
    Amount amount;
    uint64_t slot_id{0};
    friend bool operator==(const BidTransaction&, const BidTransaction&) = default;
};

struct BlockSubmission {
    std::string block_id;
    uint64_t slot_id{0};
    std::string builder_id;
    double received_at{0.0};
    double made_available_at{0.0};
    bool optimistic{false};
    std::vector<std::string> txs;  // ordered tx_ids, bid tx excluded
    Amount bid;
    Amount revenue;  // sum of included fee_offers payable to this builder
    friend bool operator==(const BlockSubmission&, const BlockSubmission&) = default;
};

struct PoolState {
    std::string pool_id;
    TokenPair pair;
    Amount reserve_base;
    Amount reserve_quote;
    uint32_t fee_ppm{3000};  // fee_rate in parts per million

    double fee_rate() const { return static_cast<double>(fee_ppm) / 1e6; }
    friend bool operator==(const PoolState&, const PoolState&) = default;
};

struct MempoolEvent {
    std::string tx_id;
    std::string channel_observation;  // "public"
    double timestamp{0.0};            // seconds within slot
    friend bool operator==(const MempoolEvent&, const MempoolEvent&) = default;
};

struct PricePoint {
    int64_t timestamp_ms{0};
    double price{0.0};
    friend bool operator==(const PricePoint&, const PricePoint&) = default;
};

struct PriceTrace {
    TokenPair pair;
    std::vector<PricePoint> points;  // timestamps strictly increasing
    friend bool operator==(const PriceTrace&, const PriceTrace&) = default;
};

struct SlotTrace {
    uint64_t slot_id{0};
    std::optional<std::string> winning_block;
    std::vector<BlockSubmission> submissions;
    std::vector<std::string> transactions;  // tx_ids visible to any builder this slot
    std::vector<MempoolEvent> mempool_events;
    std::map<std::string, PoolState> pool_states_at_slot_start;
    friend bool operator==(const SlotTrace&, const SlotTrace&) = default;
};

struct DatasetMeta {
    uint64_t seed{0};
    std::string config_digest;
    friend bool operator==(const DatasetMeta&, const DatasetMeta&) = default;
};

struct Dataset {
    std::vector<SlotTrace> slots;
    std::map<std::string, Transaction> transactions;  // tx_id -> tx
    std::map<std::string, PriceTrace> prices;         // pair symbol -> trace
    DatasetMeta meta;
};

// Slot-relative time t to wall-clock seconds.
inline double wall_time(uint64_t slot_id, double t) { return static_cast<double>(slot_id) * 12.0 + t; }

// FNV-1a over a string; identifiers are opaque, no chain compatibility.
uint64_t fnv1a(std::string_view s);
std::string hash_hex(std::string_view s);

}  // namespace pbs
