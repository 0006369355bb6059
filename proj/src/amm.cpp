#include "pbs/amm.hpp"

#include <stdexcept>

namespace pbs {

namespace {

SwapOutcome unchanged(const PoolState& s, SwapStatus st) {
    return {st, Amount{}, 0.0, s};
}

}  // namespace

SwapOutcome execute_swap(const PoolState& s, SwapDirection direction, Amount amount_in,
                         Amount min_amount_out) {
    if (s.reserve_base <= Amount{} || s.reserve_quote <= Amount{} || s.fee_ppm >= 1'000'000)
        return unchanged(s, SwapStatus::Failed);
    if (amount_in.is_negative()) return unchanged(s, SwapStatus::Failed);
    if (amount_in.is_zero()) return {SwapStatus::Success, Amount{}, 0.0, s};

    const bool base_in = direction == SwapDirection::BaseForQuote;
    const Amount in_reserve = base_in ? s.reserve_base : s.reserve_quote;
    const Amount out_reserve = base_in ? s.reserve_quote : s.reserve_base;

    const Wide a_eff = Wide(amount_in.raw()) * (1'000'000 - s.fee_ppm) / 1'000'000;
    const Wide out_raw = Wide(out_reserve.raw()) * a_eff / (Wide(in_reserve.raw()) + a_eff);
    const Amount out = Amount::from_raw(static_cast<__int128>(out_raw));

    if (out < min_amount_out) return unchanged(s, SwapStatus::Reverted);

    PoolState next = s;
    if (base_in) {
        next.reserve_base += amount_in;
        next.reserve_quote -= out;
    } else {
        next.reserve_quote += amount_in;
        next.reserve_base -= out;
    }
    const double price = out.to_double() / amount_in.to_double();
    return {SwapStatus::Success, out, price, next};
}

double quote_marginal_price(const PoolState& s) {
    return s.reserve_quote.to_double() / s.reserve_base.to_double();
}

BlockReplayResult replay_block(const std::map<std::string, PoolState>& pools_at_start,
                               const BlockSubmission& block,
                               const std::map<std::string, Transaction>& tx_table) {
    BlockReplayResult result;
    result.final_pools = pools_at_start;

    size_t pos = 0;
    for (const auto& tx_id : block.txs) {
        auto it = tx_table.find(tx_id);
        if (it == tx_table.end())
            throw std::runtime_error("replay_block: unknown tx_id " + tx_id);
        const Transaction& tx = it->second;

        TxReplay rec;
        rec.tx_id = tx_id;
        rec.position = pos++;

        if (tx.kind == TxKind::Failing) {
            rec.status = SwapStatus::Failed;
        } else if (tx.fee_guard && *tx.fee_guard != block.builder_id) {
            rec.status = SwapStatus::Failed;
        } else if (tx.kind == TxKind::Transfer) {
            rec.status = SwapStatus::Success;
        } else if (tx.swap) {
            auto pit = result.final_pools.find(tx.swap->pool_id);
            if (pit == result.final_pools.end())
                throw std::runtime_error("replay_block: unknown pool_id " + tx.swap->pool_id);
            SwapOutcome o = execute_swap(pit->second, tx.swap->direction, tx.swap->amount_in,
                                         tx.swap->min_amount_out);
            rec.status = o.status;
            rec.is_swap = true;
            rec.amount_in = tx.swap->amount_in;
            if (o.status == SwapStatus::Success) {
                rec.amount_out = o.amount_out;
                rec.exec_price = o.exec_price;
                pit->second = o.new_state;
            }
        } else {
            rec.status = SwapStatus::Failed;  // swap kind with no payload
        }
        result.txs.push_back(std::move(rec));
    }
    return result;
}

}  // namespace pbs
