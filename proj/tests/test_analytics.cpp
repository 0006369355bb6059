#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "pbs/amm.hpp"
#include "pbs/analytics.hpp"

using namespace pbs;

namespace {

Transaction transfer_tx(const std::string& id, double fee, const std::string& builder = "") {
    Transaction tx;
    tx.tx_id = id;
    tx.logical_id = id;
    tx.origin = "user";
    tx.kind = TxKind::Transfer;
    if (builder.empty()) {
        tx.fee_offers["A"] = Amount::from_double(fee);
        tx.fee_offers["B"] = Amount::from_double(fee);
        tx.fee_offers["C"] = Amount::from_double(fee);
    } else {
        tx.fee_offers[builder] = Amount::from_double(fee);
        tx.channel = Channel::exclusive(builder);
    }
    return tx;
}

BlockSubmission block(const std::string& id, const std::string& builder, double received,
                      std::vector<std::string> txs, uint64_t slot = 0) {
    BlockSubmission b;
    b.block_id = id;
    b.slot_id = slot;
    b.builder_id = builder;
    b.received_at = received;
    b.made_available_at = received;
    b.txs = std::move(txs);
    return b;
}

PoolState weth_pool(uint32_t fee_ppm = 0) {
    PoolState p;
    p.pool_id = "weth-usdc";
    p.pair = {"WETH", "USDC"};
    p.reserve_base = Amount::from_units(1000);
    p.reserve_quote = Amount::from_units(3'500'000);
    p.fee_ppm = fee_ppm;
    return p;
}

// Three builders, one slot: a public tx, an exclusive tx, a shared private tx,
// and a late-announced tx that still counts as exclusive.
Dataset classification_fixture() {
    Dataset d;
    d.transactions["pub1"] = transfer_tx("pub1", 0.5);
    d.transactions["exc1"] = transfer_tx("exc1", 8.5, "A");
    d.transactions["prv1"] = transfer_tx("prv1", 1.0);
    d.transactions["prv1"].channel = Channel::private_({"A", "B"});
    d.transactions["prv1"].fee_offers.erase("C");
    d.transactions["late"] = transfer_tx("late", 0.25, "C");
    Transaction failing;
    failing.tx_id = "fail1";
    failing.logical_id = "fail1";
    failing.origin = "user";
    failing.kind = TxKind::Failing;
    failing.fee_offers["A"] = Amount::from_double(5.0);
    d.transactions["fail1"] = failing;

    SlotTrace slot;
    slot.slot_id = 0;
    auto win = block("blk-a", "A", 5.0, {"exc1", "prv1", "pub1", "fail1"});
    win.revenue = Amount::from_double(10.0);
    win.bid = Amount::from_double(9.0);
    slot.submissions.push_back(win);
    slot.submissions.push_back(block("blk-b", "B", 4.0, {"prv1", "pub1"}));
    slot.submissions.push_back(block("blk-c", "C", 6.0, {"late"}));
    slot.winning_block = "blk-a";
    slot.mempool_events.push_back({"pub1", "public", 1.0});
    slot.mempool_events.push_back({"late", "public", 5.5});  // after the winner arrived
    d.slots.push_back(std::move(slot));
    return d;
}

const ChannelLabel& label_of(const std::vector<ChannelLabel>& ls, const std::string& id) {
    return *std::find_if(ls.begin(), ls.end(),
                         [&](const ChannelLabel& l) { return l.tx_id == id; });
}

}  // namespace

TEST_CASE("channel classification on the three-builder fixture") {
    const Dataset d = classification_fixture();
    const auto labels = classify_channels(d, 0);
    CHECK(labels.size() == 5);
    CHECK(label_of(labels, "pub1").label == ChannelKind::Public);
    CHECK(label_of(labels, "exc1").label == ChannelKind::Exclusive);
    CHECK(label_of(labels, "exc1").builder == "A");
    CHECK(label_of(labels, "prv1").label == ChannelKind::Private);
    CHECK(label_of(labels, "prv1").builder_count == 2);
    // announced publicly only after the winning block was received
    CHECK(label_of(labels, "late").label == ChannelKind::Exclusive);
    CHECK(label_of(labels, "late").builder == "C");
    CHECK_THROWS_AS(classify_channels(d, 7), std::out_of_range);
}

TEST_CASE("classification agrees with a direct re-derivation on random slots") {
    std::mt19937_64 rng(404);
    const std::vector<std::string> builders{"A", "B", "C"};
    for (int rep = 0; rep < 300; ++rep) {
        Dataset d;
        SlotTrace slot;
        slot.slot_id = 0;
        const int n_tx = 1 + static_cast<int>(rng() % 6);
        std::vector<std::vector<std::string>> per_builder(3);
        for (int i = 0; i < n_tx; ++i) {
            const std::string id = "t" + std::to_string(i);
            d.transactions[id] = transfer_tx(id, 0.1);
            const unsigned mask = 1 + static_cast<unsigned>(rng() % 7);
            for (int b = 0; b < 3; ++b)
                if (mask & (1u << b)) per_builder[b].push_back(id);
            if (rng() % 3 == 0)
                slot.mempool_events.push_back({id, "public", static_cast<double>(rng() % 12)});
        }
        for (int b = 0; b < 3; ++b)
            if (!per_builder[b].empty())
                slot.submissions.push_back(
                    block("blk-" + builders[b], builders[b],
                          2.0 + static_cast<double>(rng() % 9), per_builder[b]));
        if (slot.submissions.empty()) continue;
        slot.winning_block = slot.submissions[rng() % slot.submissions.size()].block_id;
        d.slots.push_back(slot);

        const double winner_time =
            std::find_if(d.slots[0].submissions.begin(), d.slots[0].submissions.end(),
                         [&](const auto& s) { return s.block_id == *d.slots[0].winning_block; })
                ->received_at;
        for (const auto& got : classify_channels(d, 0)) {
            bool is_public = false;
            for (const auto& ev : d.slots[0].mempool_events)
                if (ev.tx_id == got.tx_id && ev.timestamp <= winner_time) is_public = true;
            std::set<std::string> holders;
            for (const auto& s : d.slots[0].submissions)
                for (const auto& id : s.txs)
                    if (id == got.tx_id) holders.insert(s.builder_id);
            const ChannelKind want = is_public             ? ChannelKind::Public
                                     : holders.size() == 1 ? ChannelKind::Exclusive
                                                           : ChannelKind::Private;
            CHECK(got.label == want);
            CHECK(got.builder_count == holders.size());
        }
    }
}

TEST_CASE("revenue attribution partitions the winner's fees exactly") {
    const Dataset d = classification_fixture();
    const auto split = revenue_attribution(d, 0);
    CHECK(split.exclusive == Amount::from_double(8.5));
    CHECK(split.private_ == Amount::from_double(1.0));
    CHECK(split.public_ == Amount::from_double(0.5));
    CHECK(split.total == split.exclusive + split.private_ + split.public_);
    CHECK(split.total == Amount::from_double(10.0));  // the Failing tx earns nothing

    Dataset no_winner = d;
    no_winner.slots[0].winning_block.reset();
    CHECK_THROWS_AS(revenue_attribution(no_winner, 0), std::invalid_argument);
}

TEST_CASE("delayed transactions track status across cycles") {
    Dataset d;
    d.transactions["u1"] = transfer_tx("u1", 0.1, "B");
    d.transactions["w0"] = transfer_tx("w0", 0.2);
    d.transactions["w1"] = transfer_tx("w1", 0.2);
    Transaction bot = transfer_tx("arb", 2.0, "A");
    bot.kind = TxKind::SearcherSwap;
    bot.origin = "bot-1";
    bot.swap = SwapIntent{"weth-usdc", SwapDirection::BaseForQuote, Amount::from_units(1), Amount{}};
    d.transactions["arb"] = bot;

    for (uint64_t s = 0; s < 3; ++s) {
        SlotTrace slot;
        slot.slot_id = s;
        if (s < 2) {
            auto winner = block("win-" + std::to_string(s), "A", 4.0,
                                s == 0 ? std::vector<std::string>{"w0", "arb"}
                                       : std::vector<std::string>{"w1"}, s);
            slot.submissions.push_back(winner);
            slot.submissions.push_back(block("lose-" + std::to_string(s), "B", 4.5, {"u1"}, s));
            slot.winning_block = winner.block_id;
        } else {
            auto winner = block("win-2", "A", 4.0, {"u1"}, s);
            slot.submissions.push_back(winner);
            slot.submissions.push_back(block("lose-2", "B", 4.5, {"u1"}, s));
            slot.winning_block = winner.block_id;
            slot.mempool_events.push_back({"u1", "public", 0.0});
        }
        d.slots.push_back(std::move(slot));
    }

    const auto summary = delayed_transactions(d);
    const auto& rec = *std::find_if(summary.records.begin(), summary.records.end(),
                                    [](const DelayRecord& r) { return r.tx_id == "u1"; });
    CHECK(rec.first_cycle == 0);
    CHECK(rec.cycles_present == 3);
    CHECK(rec.inclusion_cycle == std::optional<uint64_t>(2));
    CHECK(rec.delayed);
    CHECK(rec.status_sequence ==
          std::vector<ChannelKind>{ChannelKind::Exclusive, ChannelKind::Exclusive,
                                   ChannelKind::Public});

    // included on first sight: not delayed
    const auto& w0 = *std::find_if(summary.records.begin(), summary.records.end(),
                                   [](const DelayRecord& r) { return r.tx_id == "w0"; });
    CHECK_FALSE(w0.delayed);
    CHECK(w0.inclusion_cycle == std::optional<uint64_t>(0));

    // bot txs are excluded from the user delay share
    CHECK(summary.user_txs_observed == 3);
    CHECK(summary.user_txs_delayed == 1);
    CHECK(summary.delayed_share == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("similarity matrix: identical, disjoint, subset, and missing rows") {
    Dataset d;
    for (const char* id : {"t1", "t2", "t3", "t4"})
        d.transactions[id] = transfer_tx(id, 0.1);
    SlotTrace slot;
    slot.slot_id = 0;
    slot.submissions.push_back(block("a1", "A", 2.0, {"t1", "t2"}));
    slot.submissions.push_back(block("b1", "B", 2.5, {"t1", "t2"}));   // identical to A's
    slot.submissions.push_back(block("c1", "C", 3.0, {"t3", "t4"}));   // disjoint
    slot.submissions.push_back(block("a2", "A", 8.0, {"t1", "t2", "t3"}));
    slot.winning_block = "a2";
    d.slots.push_back(std::move(slot));

    auto m = similarity_matrix(d, 0, 4.0);  // latest: A=a1, B=b1, C=c1
    REQUIRE(m.builders == std::vector<std::string>{"A", "B", "C"});
    CHECK(*m.entries[0][0] == 1.0);
    CHECK(*m.entries[0][1] == 1.0);
    CHECK(*m.entries[0][2] == 0.0);
    CHECK(*m.entries[2][0] == 0.0);
    CHECK(*m.entries[2][2] == 1.0);

    // later cutoff: A's latest is a2, which overlaps C in one of three txs
    m = similarity_matrix(d, 0, 9.0);
    CHECK(*m.entries[0][2] == doctest::Approx(1.0 / 3.0));
    // B's union view gained nothing, so a2 vs B is 2/3
    CHECK(*m.entries[0][1] == doctest::Approx(2.0 / 3.0));

    // before anyone has submitted, every row is undefined
    m = similarity_matrix(d, 0, 1.0);
    for (const auto& row : m.entries)
        for (const auto& e : row) CHECK_FALSE(e.has_value());
}

TEST_CASE("sharing events need a unique origin and a one-second lag") {
    Dataset d;
    for (const char* id : {"s1", "s2", "s3"}) d.transactions[id] = transfer_tx(id, 0.1);
    SlotTrace slot;
    slot.slot_id = 0;
    slot.submissions.push_back(block("a1", "A", 2.0, {"s1", "s2", "s3"}));
    slot.submissions.push_back(block("b1", "B", 4.5, {"s1"}));  // lag 2.5
    slot.submissions.push_back(block("c1", "C", 2.6, {"s2"}));  // lag 0.6, too fast
    slot.submissions.push_back(block("c2", "C", 2.0, {"s3"}));  // simultaneous first sight
    slot.submissions.push_back(block("b2", "B", 6.0, {"s3"}));
    slot.winning_block = "a1";
    d.slots.push_back(std::move(slot));

    const auto events = sharing_events(d);
    REQUIRE(events.size() == 1);
    CHECK(events[0].tx_id == "s1");
    CHECK(events[0].origin_builder == "A");
    CHECK(events[0].adopter_builder == "B");
    CHECK(events[0].lag_s == doctest::Approx(2.5));

    // cross-cycle lag uses wall time
    Dataset d2;
    d2.transactions["x"] = transfer_tx("x", 0.1);
    SlotTrace s0;
    s0.slot_id = 0;
    s0.submissions.push_back(block("a", "A", 11.0, {"x"}, 0));
    s0.winning_block = "a";
    SlotTrace s1;
    s1.slot_id = 1;
    s1.submissions.push_back(block("b", "B", 1.0, {"x"}, 1));
    s1.winning_block = "b";
    d2.slots = {s0, s1};
    const auto ev2 = sharing_events(d2);
    REQUIRE(ev2.size() == 1);
    CHECK(ev2[0].lag_s == doctest::Approx(2.0));
}

TEST_CASE("execution panel rows, p_norm symmetry, and bot-direction flags") {
    Dataset d;
    SlotTrace slot;
    slot.slot_id = 0;
    slot.pool_states_at_slot_start["weth-usdc"] = weth_pool();

    Transaction usr;
    usr.tx_id = "usr";
    usr.logical_id = "usr";
    usr.origin = "user";
    usr.kind = TxKind::UserSwap;
    usr.swap = SwapIntent{"weth-usdc", SwapDirection::BaseForQuote, Amount::from_units(10), Amount{}};
    usr.fee_offers["I"] = Amount::from_double(0.001);
    d.transactions["usr"] = usr;

    Transaction arb;
    arb.tx_id = "arb";
    arb.logical_id = "arb";
    arb.origin = "bot-1";
    arb.kind = TxKind::SearcherSwap;
    arb.swap = SwapIntent{"weth-usdc", SwapDirection::BaseForQuote, Amount::from_units(100), Amount{}};
    arb.fee_offers["I"] = Amount::from_double(1.0);
    d.transactions["arb"] = arb;

    slot.submissions.push_back(block("clean", "I", 2.0, {"usr"}));
    slot.submissions.push_back(block("fronted", "I", 3.0, {"arb", "usr"}));
    slot.winning_block = "fronted";
    d.slots.push_back(std::move(slot));

    const auto rows = execution_panel(d, {{"bot-1", "I"}});
    REQUIRE(rows.size() == 2);  // the bot tx contributes no row
    const auto& clean = rows[0].block_id == "clean" ? rows[0] : rows[1];
    const auto& fronted = rows[0].block_id == "fronted" ? rows[0] : rows[1];

    CHECK(clean.success == 1);
    CHECK(fronted.success == 1);
    CHECK_FALSE(clean.bot_present);
    CHECK(fronted.bot_present);
    CHECK(fronted.same_dir_bot_block);
    CHECK_FALSE(fronted.opp_dir_bot_block);
    CHECK(clean.time_since_prev_block == 0.0);
    CHECK(fronted.time_since_prev_block == doctest::Approx(1.0));
    CHECK(clean.position_index == 0.0);
    CHECK(fronted.position_index == 1.0);

    // expected prices from first principles
    const PoolState pool = weth_pool();
    const double p_clean =
        execute_swap(pool, SwapDirection::BaseForQuote, Amount::from_units(10), Amount{})
            .exec_price;
    const auto after_bot =
        execute_swap(pool, SwapDirection::BaseForQuote, Amount::from_units(100), Amount{});
    const double p_fronted = execute_swap(after_bot.new_state, SwapDirection::BaseForQuote,
                                          Amount::from_units(10), Amount{})
                                 .exec_price;
    const double avg = 0.5 * (p_clean + p_fronted);
    CHECK(clean.has_price);
    CHECK(clean.p_norm == doctest::Approx((p_clean - avg) / avg * 100.0).epsilon(1e-10));
    CHECK(fronted.p_norm == doctest::Approx((p_fronted - avg) / avg * 100.0).epsilon(1e-10));
    CHECK(clean.p_norm == doctest::Approx(-fronted.p_norm).epsilon(1e-10));
    CHECK(clean.p_norm > 0.0);

    // an opposite-direction bot flips the other flag
    d.transactions["arb"].swap->direction = SwapDirection::QuoteForBase;
    const auto rows2 = execution_panel(d, {{"bot-1", "I"}});
    const auto& fr2 = rows2[0].block_id == "fronted" ? rows2[0] : rows2[1];
    CHECK(fr2.opp_dir_bot_block);
    CHECK_FALSE(fr2.same_dir_bot_block);

    // a bot integrated elsewhere sets bot_present but neither direction flag
    const auto rows3 = execution_panel(d, {{"bot-1", "OTHER"}});
    const auto& fr3 = rows3[0].block_id == "fronted" ? rows3[0] : rows3[1];
    CHECK(fr3.bot_present);
    CHECK_FALSE(fr3.same_dir_bot_block);
    CHECK_FALSE(fr3.opp_dir_bot_block);
}

TEST_CASE("implied price and price improvement formulas") {
    CHECK(implied_cex_price(10.0, 1.0, 2.0, SwapDirection::QuoteForBase) == doctest::Approx(10.5));
    CHECK(implied_cex_price(10.0, 1.0, 2.0, SwapDirection::BaseForQuote) == doctest::Approx(9.5));
    CHECK_THROWS_AS(implied_cex_price(10.0, 1.0, 0.0, SwapDirection::QuoteForBase),
                    std::invalid_argument);

    // bot sells ETH on-chain (QuoteForBase on a USDC pool quoted in ETH):
    // implied buy price below the benchmark is an improvement
    const auto [diff, pct] = price_improvement(3498.53, 3500.0, SwapDirection::QuoteForBase);
    CHECK(diff == doctest::Approx(1.47).epsilon(1e-9));
    CHECK(pct == doctest::Approx(0.042).epsilon(1e-3));

    const auto [diff2, pct2] = price_improvement(3501.0, 3500.0, SwapDirection::BaseForQuote);
    CHECK(diff2 == doctest::Approx(1.0));
    CHECK(pct2 == doctest::Approx(1.0 / 35.0));
    CHECK_THROWS_AS(price_improvement(1.0, 0.0, SwapDirection::BaseForQuote),
                    std::invalid_argument);
}

namespace {

Dataset bot_trade_fixture() {
    Dataset d;
    SlotTrace slot;
    slot.slot_id = 1;
    slot.pool_states_at_slot_start["weth-usdc"] = weth_pool();

    auto mk = [&](const std::string& id, const std::string& logical, double fee, double t,
                  double amount_in) {
        Transaction tx;
        tx.tx_id = id;
        tx.logical_id = logical;
        tx.origin = "bot-1";
        tx.kind = TxKind::SearcherSwap;
        tx.swap = SwapIntent{"weth-usdc", SwapDirection::QuoteForBase,
                             Amount::from_double(amount_in), Amount{}};
        tx.fee_offers[id.back() == 'i' ? "I" : "P"] = Amount::from_double(fee);
        tx.created_at = t;
        d.transactions[id] = tx;
        slot.transactions.push_back(id);
    };
    mk("d1-i", "d1", 1.18, 2.3, 35000.0);
    mk("d1-o", "d1", 1.00, 2.3, 35000.0);
    mk("d2-i", "d2", 2.36, 2.7, 70000.0);

    slot.submissions.push_back(block("w", "I", 5.0, {"d1-i"}, 1));
    slot.winning_block = "w";
    d.slots.push_back(std::move(slot));
    return d;
}

}  // namespace

TEST_CASE("bot_trades picks the best-fee copy and simulates at slot start") {
    const Dataset d = bot_trade_fixture();
    const auto trades = bot_trades(d, "bot-1");
    REQUIRE(trades.size() == 2);  // one per logical decision
    CHECK(trades[0].tx_id == "d1-i");
    CHECK(trades[0].fee == doctest::Approx(1.18));
    CHECK(trades[0].time == doctest::Approx(12.0 + 2.3));
    CHECK(trades[1].tx_id == "d2-i");

    const auto sim = execute_swap(weth_pool(), SwapDirection::QuoteForBase,
                                  Amount::from_double(35000.0), Amount{});
    const double vol = sim.amount_out.to_double();
    CHECK(trades[0].volume == doctest::Approx(vol).epsilon(1e-12));
    const double p_dex = 35000.0 / vol;
    CHECK(trades[0].p_dex == doctest::Approx(p_dex).epsilon(1e-12));
    CHECK(trades[0].p_implied == doctest::Approx(p_dex + 1.18 / vol).epsilon(1e-12));
    CHECK(bot_trades(d, "bot-9").empty());
}

TEST_CASE("per-second series buckets on (s-1, s] with both aggregations") {
    const Dataset d = bot_trade_fixture();  // trades at wall times 14.3 and 14.7
    const auto rows = per_second_bot_series(d, "bot-1", "WETH-USDC");
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].second == 15);
    const auto trades = bot_trades(d, "bot-1");
    CHECK(rows[0].volume == doctest::Approx(trades[0].volume + trades[1].volume));
    CHECK(rows[0].mean_p_implied ==
          doctest::Approx(0.5 * (trades[0].p_implied + trades[1].p_implied)).epsilon(1e-12));

    const auto weighted = per_second_bot_series(d, "bot-1", "WETH-USDC", true);
    const double want = (trades[0].p_implied * trades[0].volume +
                         trades[1].p_implied * trades[1].volume) /
                        (trades[0].volume + trades[1].volume);
    CHECK(weighted[0].mean_p_implied == doctest::Approx(want).epsilon(1e-12));
    CHECK(per_second_bot_series(d, "bot-1", "OTHER-PAIR").empty());
}

TEST_CASE("benchmark lag regression recovers planted loadings") {
    std::mt19937_64 rng(246);
    std::uniform_real_distribution<double> jump(-5.0, 5.0);
    PriceTrace trace{{"WETH", "USDC"}, {}};
    std::vector<double> bench;
    for (int s = 0; s <= 80; ++s) {
        bench.push_back(100.0 + jump(rng));
        trace.points.push_back({s * 1000, bench.back()});
    }
    std::vector<PerSecondRow> series;
    for (int s = 4; s <= 70; ++s) {
        PerSecondRow row;
        row.second = s;
        row.mean_p_implied = 5.0 + 0.6 * bench[s] + 0.4 * bench[s - 1];
        series.push_back(row);
    }
    const auto r = benchmark_lag_regression(series, trace);
    REQUIRE(r.names == std::vector<std::string>{"const", "bench_m2", "bench_m1", "bench_0",
                                                "bench_p1", "bench_p2"});
    CHECK(r.coef[0] == doctest::Approx(5.0).epsilon(1e-6));
    CHECK(r.coef[1] == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(r.coef[2] == doctest::Approx(0.4).epsilon(1e-6));
    CHECK(r.coef[3] == doctest::Approx(0.6).epsilon(1e-6));
    CHECK(r.coef[4] == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(r.coef[5] == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(r.r2 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_THROWS_AS(benchmark_lag_regression({}, trace), std::invalid_argument);
}

TEST_CASE("improvement regression recovers planted effects and drops dead columns") {
    std::mt19937_64 rng(135);
    std::uniform_real_distribution<double> t_draw(0.0, 500.0);
    std::uniform_real_distribution<double> v_draw(5.0, 220.0);
    const size_t n = 200;
    std::vector<double> improvement(n), time(n), volume(n);
    std::vector<int> bot(n);
    for (size_t i = 0; i < n; ++i) {
        time[i] = t_draw(rng);
        volume[i] = v_draw(rng);
        bot[i] = static_cast<int>(i % 2);
        improvement[i] = 0.5 + 0.001 * time[i] - 0.008 * bot[i] + 0.0002 * volume[i] +
                         0.0001 * std::max(0.0, volume[i] - 50.0);
    }
    const auto r = improvement_regression(improvement, time, bot, volume);
    REQUIRE(r.names == std::vector<std::string>{"const", "time", "is_second_bot", "volume",
                                                "volume_gt_50", "volume_gt_100", "volume_gt_150"});
    CHECK(r.coef[0] == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(r.coef[1] == doctest::Approx(0.001).epsilon(1e-8));
    CHECK(r.coef[2] == doctest::Approx(-0.008).epsilon(1e-6));
    CHECK(r.coef[3] == doctest::Approx(0.0002).epsilon(1e-6));
    CHECK(r.coef[4] == doctest::Approx(0.0001).epsilon(1e-6));
    CHECK(std::fabs(r.coef[5]) < 1e-8);
    CHECK(std::fabs(r.coef[6]) < 1e-8);

    // a single-bot sample with small volumes sheds the degenerate columns
    std::vector<int> one_bot(n, 0);
    std::vector<double> small_vol(n);
    for (auto& v : small_vol) v = 10.0 + 30.0 * std::uniform_real_distribution<double>()(rng);
    const auto r2 = improvement_regression(improvement, time, one_bot, small_vol);
    CHECK(r2.names == std::vector<std::string>{"const", "time", "volume"});
    CHECK_THROWS_AS(improvement_regression({1, 2}, {1, 2}, {0, 0}, {1, 2}),
                    std::invalid_argument);
}
