#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pbs/types.hpp"

namespace pbs {

enum class SwapStatus { Success, Reverted, Failed };

struct SwapOutcome {
    SwapStatus status{SwapStatus::Failed};
    Amount amount_out;       // zero unless Success
    double exec_price{0.0};  // amount_out / amount_in, output units per input unit
    PoolState new_state;     // unchanged unless Success
};

struct TxReplay {
    std::string tx_id;
    size_t position{0};
    SwapStatus status{SwapStatus::Success};
    bool is_swap{false};
    Amount amount_in;
    Amount amount_out;
    double exec_price{0.0};  // output per input; 0 for non-swaps and failures
};

struct BlockReplayResult {
    std::vector<TxReplay> txs;  // positions 0..n-1 in block order
    std::map<std::string, PoolState> final_pools;
};

// Constant-product swap with fee charged on the input; the full input is
// added to reserves so the invariant grows by the fee.
//   amount_out = out_reserve * a' / (in_reserve + a'),  a' = in * (1 - fee)
// Reverted when amount_out < min_amount_out; a zero input is a Success no-op.
SwapOutcome execute_swap(const PoolState& s, SwapDirection direction, Amount amount_in,
                         Amount min_amount_out);

// Spot price reserve_quote / reserve_base, fee-exclusive.
double quote_marginal_price(const PoolState& s);

// Applies the block's transactions strictly in order; each swap sees the pool
// state left by its predecessors. Pure function of its inputs.
// Throws std::runtime_error on a tx_id missing from the table.
BlockReplayResult replay_block(const std::map<std::string, PoolState>& pools_at_start,
                               const BlockSubmission& block,
                               const std::map<std::string, Transaction>& tx_table);

}  // namespace pbs
