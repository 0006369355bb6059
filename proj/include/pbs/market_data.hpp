#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "pbs/types.hpp"

namespace pbs {

struct ArbPlan {
    std::string pool_id;
    SwapDirection direction{SwapDirection::QuoteForBase};
    double volume{0.0};              // non-quote (base) leg, token units
    double amount_in{0.0};           // input-leg size for execute_swap
    double expected_dex_price{0.0};  // quote per base, average over the trade
    double cex_price{0.0};
    double gross_profit{0.0};        // ETH (quote units); 0 when no opportunity
};

// Optional frictions on the CEX leg; the default is a frictionless venue
// with infinite depth.
struct CexFrictions {
    double fee_bps{0.0};
    double linear_impact{0.0};  // price impact per base token traded
};

// Step interpolation: value at the greatest timestamp <= t.
// Throws std::out_of_range when t precedes the first sample.
double price_at(const PriceTrace& trace, double t_seconds);
double price_at_ms(const PriceTrace& trace, int64_t t_ms);

// Geometric Brownian motion sampled at 1 Hz, deterministic for a fixed seed.
// volatility is per sqrt-second.
PriceTrace generate_gbm_trace(uint64_t seed, const TokenPair& pair, double start_price,
                              double volatility, double duration_s);

// Profit-maximizing single swap against the pool given the CEX reference
// price: trade until the fee-adjusted marginal price reaches p_cex, volume 0
// inside the no-arb band. QuoteForBase = buy base on the DEX, sell on CEX.
ArbPlan optimal_arb(const PoolState& pool, double p_cex, const CexFrictions& fr = {});

// `prices/<PAIR>.csv`, header `timestamp_ms,price`; accepts Binance kline
// exports reduced to these two columns.
PriceTrace load_price_csv(const std::filesystem::path& file, const TokenPair& pair);
void write_price_csv(const std::filesystem::path& file, const PriceTrace& trace);

}  // namespace pbs
