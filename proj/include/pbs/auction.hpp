#pragma once

#include <random>
#include <span>
#include <vector>

#include "pbs/scenario.hpp"
#include "pbs/types.hpp"

namespace pbs {

enum class EventKind : int {
    TxArrival = 0,
    BuilderSubmit = 1,
    RelayRelease = 2,
    TopBidBroadcast = 3,
    ProposerRequest = 4,
    SlotEnd = 5,
};

// Ordered by (time, kind rank, sequence number); the engine processes events
// in exactly this order.
struct AuctionEvent {
    double time{0.0};
    EventKind kind{EventKind::TxArrival};
    uint64_t seq{0};
    size_t payload{0};  // index into the per-slot payload tables

    friend bool operator<(const AuctionEvent& a, const AuctionEvent& b) {
        if (a.time != b.time) return a.time < b.time;
        if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind);
        return a.seq < b.seq;
    }
};

// Carry-over state between slots: user transactions still awaiting inclusion.
struct PendingUserTx {
    Transaction tx;
    size_t losing_cycles{0};
    bool went_public{false};
};

struct CarryState {
    std::vector<PendingUserTx> pending;
};

// Stamps made_available_at: immediately with the configured optimistic
// probability, otherwise received_at plus a log-normal delay parameterized
// to hit the (median, p75) pair.
BlockSubmission relay_admit(const RelayConfig& cfg, BlockSubmission submission,
                            std::mt19937_64& rng);

// Highest bid among submissions released by time t; zero when none.
Amount broadcast_top_bid(std::span<const BlockSubmission> submissions, double t);

// Argmax bid over made_available_at <= request_time; ties go to the earlier
// received_at, then the smaller block_id. nullopt = skipped slot.
std::optional<std::string> proposer_select(std::span<const BlockSubmission> submissions,
                                           double request_time);

// One full bidding cycle; updates pools with the winning block's state
// transition and the carry state with non-included user transactions.
// New transactions are appended to tx_table.
SlotTrace run_slot(const ScenarioConfig& scenario, uint64_t slot_id, CarryState& carry,
                   std::map<std::string, PoolState>& pools,
                   std::map<std::string, Transaction>& tx_table,
                   const std::map<std::string, PriceTrace>& traces, std::mt19937_64& rng);

Dataset run_scenario(const ScenarioConfig& scenario);

}  // namespace pbs
