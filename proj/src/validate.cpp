#include "pbs/validate.hpp"

#include <algorithm>
#include <unordered_set>

namespace pbs {

uint64_t fnv1a(std::string_view s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hash_hex(std::string_view s) {
    static const char* digits = "0123456789abcdef";
    uint64_t h = fnv1a(s);
    // second pass with a salt widens to 128 bits of output
    uint64_t h2 = fnv1a(std::string(s) + "\x01");
    std::string out(32, '0');
    for (int i = 15; i >= 0; --i) { out[i] = digits[h & 0xF]; h >>= 4; }
    for (int i = 31; i >= 16; --i) { out[i] = digits[h2 & 0xF]; h2 >>= 4; }
    return out;
}

namespace {

void check_transaction(const Transaction& tx, std::vector<Violation>& out) {
    if (tx.fee_offers.empty())
        out.push_back({"tx.fee_offers.empty", tx.tx_id, "fee_offers must be non-empty"});
    for (const auto& [b, fee] : tx.fee_offers)
        if (fee.is_negative())
            out.push_back({"tx.fee.negative", tx.tx_id, "negative fee offered to " + b});
    if (tx.channel.kind == ChannelKind::Exclusive) {
        if (tx.channel.builders.size() != 1)
            out.push_back({"tx.channel.exclusive_arity", tx.tx_id, "Exclusive channel needs exactly one builder"});
        if (tx.fee_offers.size() != 1)
            out.push_back({"tx.exclusive_fee_arity", tx.tx_id, "Exclusive channel implies a single fee offer"});
    }
    if (tx.kind == TxKind::UserSwap && tx.fee_offers.size() > 1) {
        const Amount first = tx.fee_offers.begin()->second;
        for (const auto& [b, fee] : tx.fee_offers)
            if (fee != first) {
                out.push_back({"tx.user_fee.nonuniform", tx.tx_id, "user swap offers different fees per builder"});
                break;
            }
    }
    if ((tx.kind == TxKind::UserSwap || tx.kind == TxKind::SearcherSwap) && !tx.swap)
        out.push_back({"tx.swap.missing", tx.tx_id, "swap kind without swap payload"});
}

void check_pool(const PoolState& p, const std::string& slot, std::vector<Violation>& out) {
    if (p.reserve_base <= Amount{} || p.reserve_quote <= Amount{})
        out.push_back({"pool.reserves.nonpositive", p.pool_id, "slot " + slot});
    if (p.fee_ppm >= 1'000'000)
        out.push_back({"pool.fee.invalid", p.pool_id, "fee_rate must be < 1"});
    if (p.pair.base == p.pair.quote)
        out.push_back({"pool.pair.degenerate", p.pool_id, "base equals quote"});
}

}  // namespace

std::vector<Violation> validate_dataset(const Dataset& d) {
    std::vector<Violation> out;

    for (const auto& [id, tx] : d.transactions) {
        if (id != tx.tx_id)
            out.push_back({"tx.key_mismatch", id, "table key differs from tx_id"});
        check_transaction(tx, out);
    }

    uint64_t prev_slot = 0;
    bool first = true;
    std::unordered_set<std::string> block_ids;
    for (const auto& slot : d.slots) {
        const std::string slot_str = std::to_string(slot.slot_id);
        if (!first && slot.slot_id <= prev_slot)
            out.push_back({"dataset.slots.unordered", slot_str, "slot_ids must be strictly increasing"});
        prev_slot = slot.slot_id;
        first = false;

        bool winner_found = false;
        for (const auto& sub : slot.submissions) {
            if (!block_ids.insert(sub.block_id).second)
                out.push_back({"block.id.duplicate", sub.block_id, ""});
            if (sub.made_available_at < sub.received_at)
                out.push_back({"block.timestamps.inverted", sub.block_id, "made_available_at < received_at"});
            if (sub.optimistic && sub.made_available_at != sub.received_at)
                out.push_back({"block.optimistic.delayed", sub.block_id, "optimistic blocks are released on receipt"});
            if (sub.bid > sub.revenue)
                out.push_back({"block.bid.exceeds_revenue", sub.block_id, "bid " + sub.bid.to_string() + " > revenue " + sub.revenue.to_string()});
            if (sub.bid.is_negative())
                out.push_back({"block.bid.negative", sub.block_id, ""});
            std::unordered_set<std::string> seen;
            for (const auto& tx_id : sub.txs) {
                if (!seen.insert(tx_id).second)
                    out.push_back({"block.tx.duplicate", sub.block_id, "tx " + tx_id + " repeated"});
                if (!d.transactions.contains(tx_id))
                    out.push_back({"block.tx.unknown", sub.block_id, "tx " + tx_id + " not in transaction table"});
            }
            if (slot.winning_block && sub.block_id == *slot.winning_block) winner_found = true;
        }
        if (slot.winning_block && !winner_found)
            out.push_back({"slot.winner.unknown", slot_str, "winning_block " + *slot.winning_block + " not among submissions"});
        for (const auto& [pid, pool] : slot.pool_states_at_slot_start) check_pool(pool, slot_str, out);
        for (const auto& ev : slot.mempool_events)
            if (!d.transactions.contains(ev.tx_id))
                out.push_back({"mempool_event.tx.unknown", ev.tx_id, "slot " + slot_str});
    }

    for (const auto& [sym, trace] : d.prices) {
        int64_t prev = 0;
        bool tfirst = true;
        for (const auto& pt : trace.points) {
            if (!tfirst && pt.timestamp_ms <= prev) {
                out.push_back({"trace.timestamps.unordered", sym, ""});
                break;
            }
            prev = pt.timestamp_ms;
            tfirst = false;
            if (pt.price <= 0.0) {
                out.push_back({"trace.price.nonpositive", sym, ""});
                break;
            }
        }
    }

    return out;
}

}  // namespace pbs
