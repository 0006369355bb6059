#include "pbs/reports.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <stdexcept>

#include "pbs/market_data.hpp"

namespace pbs {

namespace {

std::string fmt(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

std::string label_str(ChannelKind k) {
    switch (k) {
        case ChannelKind::Public: return "Public";
        case ChannelKind::Private: return "Private";
        case ChannelKind::Exclusive: return "Exclusive";
    }
    return "Private";
}

std::ofstream open_csv(const std::filesystem::path& out_dir, const std::string& name) {
    std::filesystem::create_directories(out_dir);
    std::ofstream out(out_dir / name);
    if (!out) throw std::runtime_error("cannot write " + (out_dir / name).string());
    return out;
}

void write_regression(std::ofstream& out, const std::string& table, const RegressionResult& r) {
    for (size_t i = 0; i < r.names.size(); ++i)
        out << table << "," << r.names[i] << "," << fmt(r.coef[i]) << "," << fmt(r.se[i]) << ","
            << fmt(r.r2) << "," << r.n << "," << r.absorbed << "\n";
}

std::vector<int> tx_groups(const std::vector<PanelRow>& rows) {
    std::map<std::string, int> ids;
    std::vector<int> groups;
    groups.reserve(rows.size());
    for (const auto& row : rows)
        groups.push_back(ids.try_emplace(row.tx_id, static_cast<int>(ids.size())).first->second);
    return groups;
}

}  // namespace

std::map<std::string, std::string> infer_bots(const Dataset& d) {
    std::map<std::string, std::string> bots;
    std::map<std::string, std::pair<Amount, std::string>> best;  // origin -> (fee, builder)
    for (const auto& [tx_id, tx] : d.transactions) {
        if (tx.kind != TxKind::SearcherSwap) continue;
        if (tx.fee_guard) {
            bots[tx.origin] = *tx.fee_guard;
            continue;
        }
        for (const auto& [builder, fee] : tx.fee_offers) {
            auto [it, inserted] = best.try_emplace(tx.origin, fee, builder);
            if (!inserted && fee > it->second.first) it->second = {fee, builder};
        }
    }
    for (const auto& [origin, fb] : best) bots.try_emplace(origin, fb.second);
    return bots;
}

RegressionResult panel_success_regression(const std::vector<PanelRow>& panel) {
    std::vector<double> y;
    std::vector<std::vector<double>> X(4);
    std::vector<PanelRow> rows = panel;
    for (const auto& row : rows) {
        y.push_back(row.success);
        X[0].push_back(row.same_dir_bot_block ? 1.0 : 0.0);
        X[1].push_back(row.opp_dir_bot_block ? 1.0 : 0.0);
        X[2].push_back(row.time_since_prev_block);
        X[3].push_back(row.position_index);
    }
    return ols(y, X, {"same_dir_bot_block", "opp_dir_bot_block", "time_since_prev_block",
                      "position_index"},
               tx_groups(rows));
}

RegressionResult panel_price_regression(const std::vector<PanelRow>& panel) {
    std::vector<PanelRow> rows;
    for (const auto& row : panel)
        if (row.has_price) rows.push_back(row);
    std::vector<double> y;
    std::vector<std::vector<double>> X(4);
    for (const auto& row : rows) {
        y.push_back(row.p_norm);
        X[0].push_back(row.same_dir_bot_block ? 1.0 : 0.0);
        X[1].push_back(row.opp_dir_bot_block ? 1.0 : 0.0);
        X[2].push_back(row.time_since_prev_block);
        X[3].push_back(row.position_index);
    }
    return ols(y, X, {"same_dir_bot_block", "opp_dir_bot_block", "time_since_prev_block",
                      "position_index"},
               tx_groups(rows));
}

void emit_report(const Dataset& d, const std::string& report,
                 const std::filesystem::path& out_dir) {
    if (report == "channels") {
        auto out = open_csv(out_dir, "channels.csv");
        out << "cycle,tx_id,label,builder,builder_count\n";
        for (const auto& slot : d.slots) {
            if (slot.submissions.empty()) continue;
            for (const auto& l : classify_channels(d, slot.slot_id))
                out << slot.slot_id << "," << l.tx_id << "," << label_str(l.label) << ","
                    << l.builder << "," << l.builder_count << "\n";
        }
    } else if (report == "revenue") {
        auto out = open_csv(out_dir, "revenue.csv");
        out << "cycle,total,exclusive,private,public\n";
        for (const auto& slot : d.slots) {
            if (!slot.winning_block) continue;
            const RevenueSplit split = revenue_attribution(d, slot.slot_id);
            out << slot.slot_id << "," << split.total.to_string() << ","
                << split.exclusive.to_string() << "," << split.private_.to_string() << ","
                << split.public_.to_string() << "\n";
        }
    } else if (report == "delays") {
        auto out = open_csv(out_dir, "delays.csv");
        out << "tx_id,first_cycle,inclusion_cycle,cycles_present,delayed,status_sequence\n";
        const DelaySummary summary = delayed_transactions(d);
        for (const auto& rec : summary.records) {
            out << rec.tx_id << "," << rec.first_cycle << ",";
            if (rec.inclusion_cycle) out << *rec.inclusion_cycle;
            out << "," << rec.cycles_present << "," << (rec.delayed ? 1 : 0) << ",";
            for (size_t i = 0; i < rec.status_sequence.size(); ++i)
                out << (i ? "|" : "") << label_str(rec.status_sequence[i]);
            out << "\n";
        }
        auto sum = open_csv(out_dir, "delays_summary.csv");
        sum << "user_txs_observed,user_txs_delayed,delayed_share\n";
        sum << summary.user_txs_observed << "," << summary.user_txs_delayed << ","
            << fmt(summary.delayed_share) << "\n";
    } else if (report == "similarity") {
        auto out = open_csv(out_dir, "similarity.csv");
        out << "cycle,t,builder_a,builder_b,similarity\n";
        for (const auto& slot : d.slots) {
            if (slot.submissions.empty()) continue;
            for (double t : {11.0, 12.0, 13.0, 14.0}) {
                const SimilarityMatrix m = similarity_matrix(d, slot.slot_id, t);
                for (size_t a = 0; a < m.builders.size(); ++a)
                    for (size_t b = 0; b < m.builders.size(); ++b) {
                        out << slot.slot_id << "," << fmt(t) << "," << m.builders[a] << ","
                            << m.builders[b] << ",";
                        if (m.entries[a][b]) out << fmt(*m.entries[a][b]);
                        out << "\n";
                    }
            }
        }
    } else if (report == "execution_panel") {
        auto out = open_csv(out_dir, "execution_panel.csv");
        out << "tx_id,block_id,slot_id,builder_id,success,p_norm,time_since_prev_block,"
               "position_index,bot_present,same_dir_bot_block,opp_dir_bot_block\n";
        for (const auto& row : execution_panel(d, infer_bots(d))) {
            out << row.tx_id << "," << row.block_id << "," << row.slot_id << ","
                << row.builder_id << "," << row.success << ",";
            if (row.has_price) out << fmt(row.p_norm);
            out << "," << fmt(row.time_since_prev_block) << "," << fmt(row.position_index) << ","
                << row.bot_present << "," << row.same_dir_bot_block << ","
                << row.opp_dir_bot_block << "\n";
        }
    } else if (report == "regressions") {
        auto out = open_csv(out_dir, "regressions.csv");
        out << "table,term,coef,se,r2,n,absorbed\n";
        const auto bots = infer_bots(d);
        const auto panel = execution_panel(d, bots);
        try {
            write_regression(out, "success", panel_success_regression(panel));
        } catch (const std::invalid_argument& e) {
            out << "success,error," << e.what() << ",,,,\n";
        }
        try {
            write_regression(out, "price", panel_price_regression(panel));
        } catch (const std::invalid_argument& e) {
            out << "price,error," << e.what() << ",,,,\n";
        }
        // per-pair lag and improvement regressions over bot implied prices
        std::set<std::string> pairs;
        for (const auto& [sym, trace] : d.prices) pairs.insert(sym);
        for (const auto& sym : pairs) {
            std::vector<PerSecondRow> series;
            std::vector<double> improvement, time_col, volume;
            std::vector<int> second_bot;
            int bot_index = 0;
            for (const auto& [bot, builder] : bots) {
                auto rows = per_second_bot_series(d, bot, sym);
                for (const auto& row : rows) series.push_back(row);
                const auto& trace = d.prices.at(sym);
                const auto trades = bot_trades(d, bot);
                for (const auto& row : rows) {
                    double bench;
                    try {
                        bench = price_at(trace, static_cast<double>(row.second));
                    } catch (const std::out_of_range&) {
                        continue;
                    }
                    // orientation from the bot's trades in that second
                    SwapDirection side = SwapDirection::QuoteForBase;
                    for (const auto& t : trades)
                        if (t.pair == sym && static_cast<int64_t>(std::ceil(t.time)) == row.second)
                            side = t.direction;
                    improvement.push_back(price_improvement(row.mean_p_implied, bench, side).second);
                    time_col.push_back(static_cast<double>(row.second));
                    second_bot.push_back(bot_index);
                    volume.push_back(row.volume);
                }
                ++bot_index;
            }
            try {
                write_regression(out, "lag_" + sym,
                                 benchmark_lag_regression(series, d.prices.at(sym)));
            } catch (const std::exception& e) {
                out << "lag_" << sym << ",error," << e.what() << ",,,,\n";
            }
            try {
                write_regression(out, "improvement_" + sym,
                                 improvement_regression(improvement, time_col, second_bot, volume));
            } catch (const std::exception& e) {
                out << "improvement_" << sym << ",error," << e.what() << ",,,,\n";
            }
        }
    } else if (report == "implied_prices") {
        auto out = open_csv(out_dir, "implied_prices.csv");
        out << "bot,pair,second,mean_p_implied,volume,benchmark\n";
        for (const auto& [bot, builder] : infer_bots(d)) {
            for (const auto& [sym, trace] : d.prices) {
                for (const auto& row : per_second_bot_series(d, bot, sym)) {
                    out << bot << "," << sym << "," << row.second << ","
                        << fmt(row.mean_p_implied) << "," << fmt(row.volume) << ",";
                    try {
                        out << fmt(price_at(trace, static_cast<double>(row.second)));
                    } catch (const std::out_of_range&) {
                    }
                    out << "\n";
                }
            }
        }
    } else {
        throw std::invalid_argument("unknown report '" + report + "'");
    }
}

}  // namespace pbs
