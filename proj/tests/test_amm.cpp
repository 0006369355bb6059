#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pbs/amm.hpp"

using namespace pbs;

namespace {

PoolState make_pool(double base, double quote, uint32_t fee_ppm) {
    PoolState p;
    p.pool_id = "pool";
    p.pair = {"WETH", "USDC"};
    p.reserve_base = Amount::from_double(base);
    p.reserve_quote = Amount::from_double(quote);
    p.fee_ppm = fee_ppm;
    return p;
}

// Oracle for the swap output: solve (x + a')(y - out) = x*y for out by
// bisection on out, using only the defining invariant, not the closed form.
double bisect_output(double in_reserve, double out_reserve, double amount_in, double fee) {
    const double a_eff = amount_in * (1.0 - fee);
    const double k = in_reserve * out_reserve;
    double lo = 0.0, hi = out_reserve;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if ((in_reserve + a_eff) * (out_reserve - mid) > k)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("swap closed form on round numbers") {
    // 100/100 pool, zero fee, swap in 100: output is exactly half the out reserve
    auto o = execute_swap(make_pool(100, 100, 0), SwapDirection::BaseForQuote,
                          Amount::from_units(100), Amount{});
    REQUIRE(o.status == SwapStatus::Success);
    CHECK(o.amount_out == Amount::from_units(50));
    CHECK(o.new_state.reserve_base == Amount::from_units(200));
    CHECK(o.new_state.reserve_quote == Amount::from_units(50));
    CHECK(o.exec_price == doctest::Approx(0.5).epsilon(1e-12));

    // same pool at fee 50%: a' = 50, out = 100*50/150
    o = execute_swap(make_pool(100, 100, 500000), SwapDirection::BaseForQuote,
                     Amount::from_units(100), Amount{});
    REQUIRE(o.status == SwapStatus::Success);
    CHECK_EQ(o.amount_out.to_string(), Amount::mul_div(Amount::from_units(100), 50, 150).to_string());

    // zero input is a Success no-op
    o = execute_swap(make_pool(100, 100, 3000), SwapDirection::QuoteForBase, Amount{}, Amount{});
    CHECK(o.status == SwapStatus::Success);
    CHECK(o.amount_out == Amount{});
    CHECK(o.new_state == make_pool(100, 100, 3000));
}

TEST_CASE("swap output matches bisection oracle to 1e-9 relative") {
    std::mt19937_64 rng(20240811);
    std::uniform_real_distribution<double> log_res(std::log(1e-2), std::log(1e6));
    std::uniform_real_distribution<double> rel_in(1e-4, 2.0);
    const uint32_t fees[] = {0, 100, 3000, 10000, 50000, 300000};
    for (int i = 0; i < 5000; ++i) {
        const double x = std::exp(log_res(rng));
        const double y = std::exp(log_res(rng));
        const uint32_t fee_ppm = fees[rng() % 6];
        const auto dir = (rng() & 1) ? SwapDirection::BaseForQuote : SwapDirection::QuoteForBase;
        const double in_res = dir == SwapDirection::BaseForQuote ? x : y;
        const double out_res = dir == SwapDirection::BaseForQuote ? y : x;
        const double amt = in_res * rel_in(rng);

        PoolState p = make_pool(x, y, fee_ppm);
        // quantize the same way the fixed-point engine sees its inputs
        const double in_q = Amount::from_double(amt).to_double();
        const double x_q = p.reserve_base.to_double();
        const double y_q = p.reserve_quote.to_double();
        const auto o = execute_swap(p, dir, Amount::from_double(amt), Amount{});
        REQUIRE(o.status == SwapStatus::Success);
        const double want = bisect_output(dir == SwapDirection::BaseForQuote ? x_q : y_q,
                                          dir == SwapDirection::BaseForQuote ? y_q : x_q,
                                          in_q, fee_ppm / 1e6);
        CHECK(std::fabs(o.amount_out.to_double() - want) <=
              1e-9 * want + 2e-18);
    }
}

TEST_CASE("reserve product never decreases and grows with a positive fee") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> log_res(std::log(1.0), std::log(1e5));
    for (int i = 0; i < 2000; ++i) {
        PoolState p = make_pool(std::exp(log_res(rng)), std::exp(log_res(rng)),
                                (i % 2) ? 3000u : 0u);
        const auto dir = (rng() & 1) ? SwapDirection::BaseForQuote : SwapDirection::QuoteForBase;
        const Amount in = Amount::from_double(std::exp(log_res(rng)) * 1e-3);
        const Wide before = raw_product(p.reserve_base, p.reserve_quote);
        const auto o = execute_swap(p, dir, in, Amount{});
        REQUIRE(o.status == SwapStatus::Success);
        const Wide after = raw_product(o.new_state.reserve_base, o.new_state.reserve_quote);
        CHECK(after >= before);
    }
}

TEST_CASE("revert leaves the pool untouched") {
    const PoolState p = make_pool(100, 100, 3000);
    const auto o = execute_swap(p, SwapDirection::BaseForQuote, Amount::from_units(1),
                                Amount::from_units(2));  // out is < 1, demand 2
    CHECK(o.status == SwapStatus::Reverted);
    CHECK(o.amount_out == Amount{});
    CHECK(o.new_state == p);
}

TEST_CASE("marginal price and its response to swaps") {
    PoolState p = make_pool(100, 200, 3000);
    CHECK(quote_marginal_price(p) == doctest::Approx(2.0));
    // buying quote with base pushes the quote-per-base price down
    auto o = execute_swap(p, SwapDirection::BaseForQuote, Amount::from_units(10), Amount{});
    CHECK(quote_marginal_price(o.new_state) < 2.0);
    // buying base with quote pushes it up
    o = execute_swap(p, SwapDirection::QuoteForBase, Amount::from_units(10), Amount{});
    CHECK(quote_marginal_price(o.new_state) > 2.0);
}

TEST_CASE("larger swaps get a worse average price") {
    const PoolState p = make_pool(1000, 2000, 3000);
    double prev = 1e300;
    for (double a : {1.0, 10.0, 100.0, 1000.0}) {
        const auto o =
            execute_swap(p, SwapDirection::BaseForQuote, Amount::from_double(a), Amount{});
        REQUIRE(o.status == SwapStatus::Success);
        CHECK(o.exec_price < prev);
        prev = o.exec_price;
    }
}

namespace {

Transaction swap_tx(const std::string& id, SwapDirection dir, Amount in, Amount min_out,
                    TxKind kind = TxKind::SearcherSwap) {
    Transaction tx;
    tx.tx_id = id;
    tx.logical_id = id;
    tx.origin = "x";
    tx.kind = kind;
    tx.swap = SwapIntent{"pool", dir, in, min_out};
    tx.fee_offers["b"] = Amount::from_double(0.001);
    return tx;
}

}  // namespace

TEST_CASE("replay_block applies txs in order and is deterministic") {
    std::map<std::string, PoolState> pools{{"pool", make_pool(100, 100, 0)}};
    std::map<std::string, Transaction> table;
    table["t1"] = swap_tx("t1", SwapDirection::BaseForQuote, Amount::from_units(100), Amount{});
    table["t2"] = swap_tx("t2", SwapDirection::BaseForQuote, Amount::from_units(100), Amount{});
    table["t3"] = swap_tx("t3", SwapDirection::BaseForQuote, Amount::from_units(1),
                          Amount::from_units(10));  // impossible min_out
    Transaction fail;
    fail.tx_id = "t4";
    fail.kind = TxKind::Failing;
    fail.fee_offers["b"] = Amount{};
    table["t4"] = fail;

    BlockSubmission blk;
    blk.block_id = "blk";
    blk.builder_id = "b";
    blk.txs = {"t1", "t2", "t3", "t4"};

    const auto r1 = replay_block(pools, blk, table);
    REQUIRE(r1.txs.size() == 4);
    // t1: 100 into 100/100 -> out 50; t2 sees 200/50 -> out 50*100/300
    CHECK(r1.txs[0].status == SwapStatus::Success);
    CHECK(r1.txs[0].amount_out == Amount::from_units(50));
    CHECK(r1.txs[1].status == SwapStatus::Success);
    CHECK(r1.txs[1].amount_out == Amount::mul_div(Amount::from_units(50), 100, 300));
    CHECK(r1.txs[2].status == SwapStatus::Reverted);
    CHECK(r1.txs[3].status == SwapStatus::Failed);
    CHECK(r1.final_pools.at("pool").reserve_base == Amount::from_units(300));

    const auto r2 = replay_block(pools, blk, table);
    CHECK(r2.final_pools.at("pool") == r1.final_pools.at("pool"));
    for (size_t i = 0; i < 4; ++i) {
        CHECK(r2.txs[i].status == r1.txs[i].status);
        CHECK(r2.txs[i].amount_out == r1.txs[i].amount_out);
    }

    blk.txs.push_back("ghost");
    CHECK_THROWS_AS(replay_block(pools, blk, table), std::runtime_error);
}

TEST_CASE("fee_guard fails the tx under a foreign builder and only then") {
    std::map<std::string, PoolState> pools{{"pool", make_pool(100, 100, 0)}};
    std::map<std::string, Transaction> table;
    auto tx = swap_tx("g", SwapDirection::BaseForQuote, Amount::from_units(1), Amount{});
    tx.fee_guard = "builder-a";
    table["g"] = tx;

    BlockSubmission blk;
    blk.block_id = "blk";
    blk.builder_id = "builder-b";
    blk.txs = {"g"};
    CHECK(replay_block(pools, blk, table).txs[0].status == SwapStatus::Failed);

    blk.builder_id = "builder-a";
    CHECK(replay_block(pools, blk, table).txs[0].status == SwapStatus::Success);
}

TEST_CASE("a swap ahead of a user tx moves the user's execution price") {
    std::map<std::string, PoolState> pools{{"pool", make_pool(1000, 2000, 3000)}};
    std::map<std::string, Transaction> table;
    table["bot"] = swap_tx("bot", SwapDirection::BaseForQuote, Amount::from_units(50), Amount{});
    table["usr"] = swap_tx("usr", SwapDirection::BaseForQuote, Amount::from_units(5), Amount{},
                           TxKind::UserSwap);

    BlockSubmission alone;
    alone.block_id = "a";
    alone.builder_id = "b";
    alone.txs = {"usr"};
    BlockSubmission behind;
    behind.block_id = "c";
    behind.builder_id = "b";
    behind.txs = {"bot", "usr"};

    const double p_alone = replay_block(pools, alone, table).txs[0].exec_price;
    const double p_behind = replay_block(pools, behind, table).txs[1].exec_price;
    CHECK(p_behind < p_alone);  // same-direction bot flow worsens the user's price
}
