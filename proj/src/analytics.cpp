#include "pbs/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "pbs/amm.hpp"
#include "pbs/market_data.hpp"

namespace pbs {

namespace {

const SlotTrace& find_slot(const Dataset& d, uint64_t cycle) {
    for (const auto& s : d.slots)
        if (s.slot_id == cycle) return s;
    throw std::out_of_range("unknown cycle " + std::to_string(cycle));
}

const BlockSubmission* winning_submission(const SlotTrace& slot) {
    if (!slot.winning_block) return nullptr;
    for (const auto& s : slot.submissions)
        if (s.block_id == *slot.winning_block) return &s;
    return nullptr;
}

}  // namespace

std::vector<ChannelLabel> classify_channels(const Dataset& d, uint64_t cycle) {
    const SlotTrace& slot = find_slot(d, cycle);
    const BlockSubmission* winner = winning_submission(slot);
    const double winner_time = winner ? winner->received_at : 12.0;

    std::map<std::string, std::set<std::string>> builders_by_tx;
    for (const auto& sub : slot.submissions)
        for (const auto& tx_id : sub.txs) builders_by_tx[tx_id].insert(sub.builder_id);

    std::unordered_set<std::string> public_seen;
    for (const auto& ev : slot.mempool_events)
        if (ev.channel_observation == "public" && ev.timestamp <= winner_time)
            public_seen.insert(ev.tx_id);

    std::vector<ChannelLabel> out;
    for (const auto& [tx_id, builders] : builders_by_tx) {
        ChannelLabel label;
        label.tx_id = tx_id;
        label.builder_count = builders.size();
        if (public_seen.contains(tx_id)) {
            label.label = ChannelKind::Public;
        } else if (builders.size() == 1) {
            label.label = ChannelKind::Exclusive;
            label.builder = *builders.begin();
        } else {
            label.label = ChannelKind::Private;
        }
        out.push_back(std::move(label));
    }
    return out;
}

RevenueSplit revenue_attribution(const Dataset& d, uint64_t cycle) {
    const SlotTrace& slot = find_slot(d, cycle);
    const BlockSubmission* winner = winning_submission(slot);
    if (!winner) throw std::invalid_argument("cycle " + std::to_string(cycle) + " has no winner");

    std::map<std::string, ChannelKind> labels;
    for (const auto& l : classify_channels(d, cycle)) labels[l.tx_id] = l.label;

    const BlockReplayResult replay =
        replay_block(slot.pool_states_at_slot_start, *winner, d.transactions);

    RevenueSplit split;
    for (const auto& rec : replay.txs) {
        if (rec.status != SwapStatus::Success) continue;
        const Transaction& tx = d.transactions.at(rec.tx_id);
        auto fit = tx.fee_offers.find(winner->builder_id);
        if (fit == tx.fee_offers.end()) continue;
        split.total += fit->second;
        switch (labels.at(rec.tx_id)) {
            case ChannelKind::Exclusive: split.exclusive += fit->second; break;
            case ChannelKind::Private: split.private_ += fit->second; break;
            case ChannelKind::Public: split.public_ += fit->second; break;
        }
    }
    return split;
}

DelaySummary delayed_transactions(const Dataset& d) {
    struct Track {
        uint64_t first_cycle{0};
        std::optional<uint64_t> inclusion_cycle;
        size_t cycles_present{0};
        std::vector<ChannelKind> statuses;
        bool delayed{false};
        bool seen{false};
    };
    std::map<std::string, Track> tracks;

    for (const auto& slot : d.slots) {
        if (slot.submissions.empty()) continue;
        std::map<std::string, ChannelKind> labels;
        for (const auto& l : classify_channels(d, slot.slot_id)) labels[l.tx_id] = l.label;

        const BlockSubmission* winner = winning_submission(slot);
        std::unordered_set<std::string> in_winner;
        if (winner)
            for (const auto& tx_id : winner->txs) in_winner.insert(tx_id);

        for (const auto& [tx_id, label] : labels) {
            Track& tr = tracks[tx_id];
            if (!tr.seen) {
                tr.seen = true;
                tr.first_cycle = slot.slot_id;
            }
            tr.cycles_present += 1;
            tr.statuses.push_back(label);
            if (in_winner.contains(tx_id)) {
                if (!tr.inclusion_cycle) tr.inclusion_cycle = slot.slot_id;
            } else {
                tr.delayed = true;  // proposed this cycle, absent from its winner
            }
        }
    }

    DelaySummary out;
    for (auto& [tx_id, tr] : tracks) {
        DelayRecord rec;
        rec.tx_id = tx_id;
        rec.first_cycle = tr.first_cycle;
        rec.inclusion_cycle = tr.inclusion_cycle;
        rec.cycles_present = tr.cycles_present;
        rec.status_sequence = std::move(tr.statuses);
        rec.delayed = tr.delayed;
        auto tit = d.transactions.find(tx_id);
        const bool is_user = tit != d.transactions.end() && tit->second.kind != TxKind::SearcherSwap;
        if (is_user) {
            out.user_txs_observed += 1;
            if (rec.delayed) out.user_txs_delayed += 1;
        }
        out.records.push_back(std::move(rec));
    }
    out.delayed_share = out.user_txs_observed == 0
                            ? 0.0
                            : static_cast<double>(out.user_txs_delayed) /
                                  static_cast<double>(out.user_txs_observed);
    return out;
}

SimilarityMatrix similarity_matrix(const Dataset& d, uint64_t cycle, double t) {
    const SlotTrace& slot = find_slot(d, cycle);

    std::set<std::string> builder_set;
    for (const auto& sub : slot.submissions) builder_set.insert(sub.builder_id);

    SimilarityMatrix m;
    m.builders.assign(builder_set.begin(), builder_set.end());

    std::map<std::string, const BlockSubmission*> latest;
    std::map<std::string, std::unordered_set<std::string>> seen_any;
    for (const auto& sub : slot.submissions) {
        if (sub.received_at > t) continue;
        auto& cur = latest[sub.builder_id];
        if (!cur || sub.received_at > cur->received_at ||
            (sub.received_at == cur->received_at && sub.block_id > cur->block_id))
            cur = &sub;
        for (const auto& tx_id : sub.txs) seen_any[sub.builder_id].insert(tx_id);
    }

    for (const auto& a : m.builders) {
        std::vector<std::optional<double>> row;
        const BlockSubmission* la = latest.contains(a) ? latest.at(a) : nullptr;
        for (const auto& b : m.builders) {
            if (!la || la->txs.empty()) {
                row.push_back(std::nullopt);
                continue;
            }
            const auto& bs = seen_any[b];
            size_t inter = 0;
            for (const auto& tx_id : la->txs)
                if (bs.contains(tx_id)) ++inter;
            row.push_back(static_cast<double>(inter) / static_cast<double>(la->txs.size()));
        }
        m.entries.push_back(std::move(row));
    }
    return m;
}

std::vector<SharingEvent> sharing_events(const Dataset& d) {
    // first wall-clock appearance per (tx, builder)
    std::map<std::string, std::map<std::string, double>> first_seen;
    for (const auto& slot : d.slots)
        for (const auto& sub : slot.submissions) {
            const double w = wall_time(slot.slot_id, sub.received_at);
            for (const auto& tx_id : sub.txs) {
                auto [it, inserted] = first_seen[tx_id].try_emplace(sub.builder_id, w);
                if (!inserted && w < it->second) it->second = w;
            }
        }

    std::vector<SharingEvent> out;
    for (const auto& [tx_id, per_builder] : first_seen) {
        if (per_builder.size() < 2) continue;
        const auto origin = std::min_element(per_builder.begin(), per_builder.end(),
                                             [](const auto& a, const auto& b) {
                                                 return a.second < b.second;
                                             });
        // the origin must have held the tx alone; a same-time appearance in
        // another builder voids exclusivity
        bool unique_min = true;
        for (const auto& [b, w] : per_builder)
            if (b != origin->first && w <= origin->second) unique_min = false;
        if (!unique_min) continue;
        for (const auto& [b, w] : per_builder) {
            if (b == origin->first) continue;
            const double lag = w - origin->second;
            if (lag >= 1.0) out.push_back({tx_id, origin->first, b, lag});
        }
    }
    return out;
}

std::vector<PanelRow> execution_panel(const Dataset& d,
                                      const std::map<std::string, std::string>& bot_builders) {
    std::vector<PanelRow> rows;
    std::unordered_map<std::string, std::pair<double, size_t>> price_acc;  // tx -> (sum, count)
    std::vector<double> prices;  // parallel to rows, NaN when absent

    for (const auto& slot : d.slots) {
        // directions traded by each bot on each pool during this cycle
        std::map<std::string, std::set<std::pair<std::string, SwapDirection>>> bot_dirs;  // bot -> {(pool, dir)}
        std::unordered_set<std::string> cycle_txs;
        for (const auto& sub : slot.submissions)
            for (const auto& tx_id : sub.txs) cycle_txs.insert(tx_id);
        for (const auto& tx_id : cycle_txs) {
            const Transaction& tx = d.transactions.at(tx_id);
            if (tx.kind == TxKind::SearcherSwap && tx.swap && bot_builders.contains(tx.origin))
                bot_dirs[tx.origin].insert({tx.swap->pool_id, tx.swap->direction});
        }

        std::vector<const BlockSubmission*> ordered;
        for (const auto& sub : slot.submissions) ordered.push_back(&sub);
        std::sort(ordered.begin(), ordered.end(),
                  [](const BlockSubmission* a, const BlockSubmission* b) {
                      return a->received_at != b->received_at ? a->received_at < b->received_at
                                                              : a->block_id < b->block_id;
                  });

        double prev_received = 0.0;
        bool first = true;
        for (const BlockSubmission* sub : ordered) {
            const double dt = first ? 0.0 : sub->received_at - prev_received;
            prev_received = sub->received_at;
            first = false;

            std::set<std::string> bots_in_block;
            for (const auto& tx_id : sub->txs) {
                const Transaction& tx = d.transactions.at(tx_id);
                if (bot_builders.contains(tx.origin)) bots_in_block.insert(tx.origin);
            }

            const BlockReplayResult replay =
                replay_block(slot.pool_states_at_slot_start, *sub, d.transactions);
            for (const auto& rec : replay.txs) {
                const Transaction& tx = d.transactions.at(rec.tx_id);
                if (tx.kind != TxKind::UserSwap || !tx.swap) continue;

                PanelRow row;
                row.tx_id = rec.tx_id;
                row.block_id = sub->block_id;
                row.slot_id = slot.slot_id;
                row.builder_id = sub->builder_id;
                row.success = rec.status == SwapStatus::Success ? 1 : 0;
                row.time_since_prev_block = dt;
                row.position_index = static_cast<double>(rec.position);
                row.bot_present = !bots_in_block.empty();

                for (const auto& bot : bots_in_block) {
                    if (bot_builders.at(bot) != sub->builder_id) continue;
                    const auto& dirs = bot_dirs[bot];
                    if (dirs.contains({tx.swap->pool_id, tx.swap->direction}))
                        row.same_dir_bot_block = true;
                    const SwapDirection opp = tx.swap->direction == SwapDirection::BaseForQuote
                                                  ? SwapDirection::QuoteForBase
                                                  : SwapDirection::BaseForQuote;
                    if (dirs.contains({tx.swap->pool_id, opp})) row.opp_dir_bot_block = true;
                }

                if (row.success) {
                    auto& acc = price_acc[rec.tx_id];
                    acc.first += rec.exec_price;
                    acc.second += 1;
                    prices.push_back(rec.exec_price);
                } else {
                    prices.push_back(std::nan(""));
                }
                rows.push_back(std::move(row));
            }
        }
    }

    for (size_t i = 0; i < rows.size(); ++i) {
        if (std::isnan(prices[i])) continue;
        const auto& acc = price_acc.at(rows[i].tx_id);
        const double p_avg = acc.first / static_cast<double>(acc.second);
        if (p_avg != 0.0) {
            rows[i].has_price = true;
            rows[i].p_norm = (prices[i] - p_avg) / p_avg * 100.0;
        }
    }
    return rows;
}

double implied_cex_price(double p_dex, double fee, double volume, SwapDirection dex_side) {
    if (volume <= 0.0) throw std::invalid_argument("implied_cex_price: volume must be positive");
    return dex_side == SwapDirection::QuoteForBase ? p_dex + fee / volume : p_dex - fee / volume;
}

std::pair<double, double> price_improvement(double p_implied, double p_benchmark,
                                            SwapDirection dex_side) {
    if (p_benchmark <= 0.0)
        throw std::invalid_argument("price_improvement: benchmark must be positive");
    // QuoteForBase: the bot sells ETH on-chain, so it buys ETH on the CEX and
    // a lower CEX price is better.
    const double diff = dex_side == SwapDirection::QuoteForBase ? p_benchmark - p_implied
                                                                : p_implied - p_benchmark;
    return {diff, diff / p_benchmark * 100.0};
}

std::vector<BotTrade> bot_trades(const Dataset& d, const std::string& bot_id) {
    std::vector<BotTrade> out;
    for (const auto& slot : d.slots) {
        // pick the integrated copy per decision: the variant with the highest fee
        std::map<std::string, const Transaction*> by_logical;
        for (const auto& tx_id : slot.transactions) {
            auto it = d.transactions.find(tx_id);
            if (it == d.transactions.end()) continue;
            const Transaction& tx = it->second;
            if (tx.origin != bot_id || tx.kind != TxKind::SearcherSwap || !tx.swap) continue;
            auto [cur, inserted] = by_logical.try_emplace(tx.logical_id, &tx);
            if (!inserted) {
                const Amount f_new = std::max_element(tx.fee_offers.begin(), tx.fee_offers.end(),
                                                      [](const auto& a, const auto& b) {
                                                          return a.second < b.second;
                                                      })->second;
                const Amount f_old = std::max_element(cur->second->fee_offers.begin(),
                                                      cur->second->fee_offers.end(),
                                                      [](const auto& a, const auto& b) {
                                                          return a.second < b.second;
                                                      })->second;
                if (f_new > f_old) cur->second = &tx;
            }
        }

        for (const auto& [logical, txp] : by_logical) {
            const Transaction& tx = *txp;
            auto pit = slot.pool_states_at_slot_start.find(tx.swap->pool_id);
            if (pit == slot.pool_states_at_slot_start.end()) continue;
            const SwapOutcome sim =
                execute_swap(pit->second, tx.swap->direction, tx.swap->amount_in, Amount{});
            if (sim.status != SwapStatus::Success || sim.amount_out.is_zero()) continue;

            BotTrade trade;
            trade.tx_id = tx.tx_id;
            trade.bot_id = bot_id;
            trade.pool_id = tx.swap->pool_id;
            trade.pair = pit->second.pair.symbol();
            trade.slot_id = slot.slot_id;
            trade.time = wall_time(slot.slot_id, tx.created_at);
            trade.direction = tx.swap->direction;
            if (tx.swap->direction == SwapDirection::QuoteForBase) {
                trade.volume = sim.amount_out.to_double();
                trade.p_dex = tx.swap->amount_in.to_double() / trade.volume;
            } else {
                trade.volume = tx.swap->amount_in.to_double();
                trade.p_dex = sim.amount_out.to_double() / trade.volume;
            }
            trade.fee = std::max_element(tx.fee_offers.begin(), tx.fee_offers.end(),
                                         [](const auto& a, const auto& b) {
                                             return a.second < b.second;
                                         })->second.to_double();
            trade.p_implied =
                implied_cex_price(trade.p_dex, trade.fee, trade.volume, trade.direction);
            out.push_back(std::move(trade));
        }
    }
    std::sort(out.begin(), out.end(), [](const BotTrade& a, const BotTrade& b) {
        return a.time != b.time ? a.time < b.time : a.tx_id < b.tx_id;
    });
    return out;
}

std::vector<PerSecondRow> per_second_bot_series(const Dataset& d, const std::string& bot_id,
                                                const std::string& pair_symbol,
                                                bool volume_weighted) {
    std::map<int64_t, std::vector<const BotTrade*>> buckets;
    const auto trades = bot_trades(d, bot_id);
    for (const auto& t : trades) {
        if (t.pair != pair_symbol) continue;
        buckets[static_cast<int64_t>(std::ceil(t.time))].push_back(&t);
    }
    std::vector<PerSecondRow> out;
    for (const auto& [s, bucket] : buckets) {
        PerSecondRow row;
        row.second = s;
        row.bot_id = bot_id;
        double psum = 0.0, wsum = 0.0;
        for (const BotTrade* t : bucket) {
            const double w = volume_weighted ? t->volume : 1.0;
            psum += w * t->p_implied;
            wsum += w;
            row.volume += t->volume;
        }
        row.mean_p_implied = psum / wsum;
        out.push_back(std::move(row));
    }
    return out;
}

RegressionResult benchmark_lag_regression(const std::vector<PerSecondRow>& series,
                                          const PriceTrace& trace) {
    if (series.size() < 10)
        throw std::invalid_argument("benchmark_lag_regression: need at least 10 rows");
    std::vector<double> y;
    std::vector<std::vector<double>> X(6);
    const std::vector<std::string> names = {"const",   "bench_m2", "bench_m1",
                                            "bench_0", "bench_p1", "bench_p2"};
    for (const auto& row : series) {
        y.push_back(row.mean_p_implied);
        X[0].push_back(1.0);
        for (int off = -2; off <= 2; ++off)
            X[static_cast<size_t>(off + 3)].push_back(
                price_at(trace, static_cast<double>(row.second + off)));
    }
    return ols(y, X, names);
}

RegressionResult improvement_regression(const std::vector<double>& improvement,
                                        const std::vector<double>& time,
                                        const std::vector<int>& is_second_bot,
                                        const std::vector<double>& volume) {
    const size_t n = improvement.size();
    if (n < 10) throw std::invalid_argument("improvement_regression: need at least 10 rows");
    if (time.size() != n || is_second_bot.size() != n || volume.size() != n)
        throw std::invalid_argument("improvement_regression: ragged inputs");

    std::vector<std::string> names = {"const"};
    std::vector<std::vector<double>> X = {std::vector<double>(n, 1.0)};

    auto add_if_varying = [&](std::vector<double> col, const std::string& name) {
        const double first = col.front();
        const bool varies = std::any_of(col.begin(), col.end(),
                                        [&](double v) { return v != first; });
        if (!varies) return;
        names.push_back(name);
        X.push_back(std::move(col));
    };

    add_if_varying(time, "time");
    {
        std::vector<double> bot(n);
        for (size_t i = 0; i < n; ++i) bot[i] = static_cast<double>(is_second_bot[i]);
        add_if_varying(std::move(bot), "is_second_bot");
    }
    add_if_varying(volume, "volume");
    for (double knot : {50.0, 100.0, 150.0}) {
        std::vector<double> hinge(n);
        for (size_t i = 0; i < n; ++i) hinge[i] = std::max(0.0, volume[i] - knot);
        add_if_varying(std::move(hinge), "volume_gt_" + std::to_string(static_cast<int>(knot)));
    }
    return ols(improvement, X, names);
}

}  // namespace pbs
