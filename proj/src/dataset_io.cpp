#include "pbs/dataset_io.hpp"

#include <fstream>
#include <stdexcept>

#include "pbs/market_data.hpp"

namespace pbs {

namespace {

std::string kind_str(TxKind k) {
    switch (k) {
        case TxKind::UserSwap: return "UserSwap";
        case TxKind::SearcherSwap: return "SearcherSwap";
        case TxKind::Transfer: return "Transfer";
        case TxKind::Failing: return "Failing";
    }
    return "Transfer";
}

TxKind kind_from(const std::string& s) {
    if (s == "UserSwap") return TxKind::UserSwap;
    if (s == "SearcherSwap") return TxKind::SearcherSwap;
    if (s == "Transfer") return TxKind::Transfer;
    if (s == "Failing") return TxKind::Failing;
    throw std::runtime_error("unknown tx kind '" + s + "'");
}

std::string dir_str(SwapDirection d) {
    return d == SwapDirection::BaseForQuote ? "BaseForQuote" : "QuoteForBase";
}

SwapDirection dir_from(const std::string& s) {
    if (s == "BaseForQuote") return SwapDirection::BaseForQuote;
    if (s == "QuoteForBase") return SwapDirection::QuoteForBase;
    throw std::runtime_error("unknown swap direction '" + s + "'");
}

Amount amount_from(const Json& j) {
    auto a = Amount::parse(j.get<std::string>());
    if (!a) throw std::runtime_error("bad amount '" + j.get<std::string>() + "'");
    return *a;
}

Json pool_to_json(const PoolState& p) {
    Json j;
    j["pool_id"] = p.pool_id;
    j["pair"] = {{"base", p.pair.base}, {"quote", p.pair.quote}};
    j["reserve_base"] = p.reserve_base.to_string();
    j["reserve_quote"] = p.reserve_quote.to_string();
    j["fee_ppm"] = p.fee_ppm;
    return j;
}

PoolState pool_from_json(const Json& j) {
    PoolState p;
    p.pool_id = j.at("pool_id").get<std::string>();
    p.pair.base = j.at("pair").at("base").get<std::string>();
    p.pair.quote = j.at("pair").at("quote").get<std::string>();
    p.reserve_base = amount_from(j.at("reserve_base"));
    p.reserve_quote = amount_from(j.at("reserve_quote"));
    p.fee_ppm = j.at("fee_ppm").get<uint32_t>();
    return p;
}

}  // namespace

Json to_json(const Transaction& tx) {
    Json j;
    j["tx_id"] = tx.tx_id;
    j["logical_id"] = tx.logical_id;
    j["origin"] = tx.origin;
    j["kind"] = kind_str(tx.kind);
    if (tx.swap) {
        Json s;
        s["pool_id"] = tx.swap->pool_id;
        s["direction"] = dir_str(tx.swap->direction);
        s["amount_in"] = tx.swap->amount_in.to_string();
        s["min_amount_out"] = tx.swap->min_amount_out.to_string();
        j["swap"] = s;
    }
    Json fees = Json::object();
    for (const auto& [b, fee] : tx.fee_offers) fees[b] = fee.to_string();
    j["fee_offers"] = fees;
    Json ch;
    switch (tx.channel.kind) {
        case ChannelKind::Public: ch["kind"] = "Public"; break;
        case ChannelKind::Private: ch["kind"] = "Private"; break;
        case ChannelKind::Exclusive: ch["kind"] = "Exclusive"; break;
    }
    if (tx.channel.kind != ChannelKind::Public)
        ch["builders"] = std::vector<std::string>(tx.channel.builders.begin(),
                                                  tx.channel.builders.end());
    j["channel"] = ch;
    j["created_at"] = tx.created_at;
    if (tx.fee_guard) j["fee_guard"] = *tx.fee_guard;
    return j;
}

Transaction transaction_from_json(const Json& j) {
    Transaction tx;
    tx.tx_id = j.at("tx_id").get<std::string>();
    tx.logical_id = j.at("logical_id").get<std::string>();
    tx.origin = j.at("origin").get<std::string>();
    tx.kind = kind_from(j.at("kind").get<std::string>());
    if (j.contains("swap")) {
        SwapIntent s;
        const Json& js = j.at("swap");
        s.pool_id = js.at("pool_id").get<std::string>();
        s.direction = dir_from(js.at("direction").get<std::string>());
        s.amount_in = amount_from(js.at("amount_in"));
        s.min_amount_out = amount_from(js.at("min_amount_out"));
        tx.swap = s;
    }
    for (const auto& [b, fee] : j.at("fee_offers").items()) tx.fee_offers[b] = amount_from(fee);
    const std::string ck = j.at("channel").at("kind").get<std::string>();
    if (ck == "Public") {
        tx.channel = Channel::public_();
    } else {
        std::set<std::string> bs;
        for (const auto& b : j.at("channel").at("builders")) bs.insert(b.get<std::string>());
        tx.channel = ck == "Exclusive" ? Channel{ChannelKind::Exclusive, bs}
                                       : Channel::private_(bs);
    }
    tx.created_at = j.at("created_at").get<double>();
    if (j.contains("fee_guard")) tx.fee_guard = j.at("fee_guard").get<std::string>();
    return tx;
}

Json to_json(const BlockSubmission& sub) {
    Json j;
    j["block_id"] = sub.block_id;
    j["slot_id"] = sub.slot_id;
    j["builder_id"] = sub.builder_id;
    j["received_at"] = sub.received_at;
    j["made_available_at"] = sub.made_available_at;
    j["optimistic"] = sub.optimistic;
    j["txs"] = sub.txs;
    j["bid"] = sub.bid.to_string();
    j["revenue"] = sub.revenue.to_string();
    return j;
}

BlockSubmission submission_from_json(const Json& j) {
    BlockSubmission sub;
    sub.block_id = j.at("block_id").get<std::string>();
    sub.slot_id = j.at("slot_id").get<uint64_t>();
    sub.builder_id = j.at("builder_id").get<std::string>();
    sub.received_at = j.at("received_at").get<double>();
    sub.made_available_at = j.at("made_available_at").get<double>();
    sub.optimistic = j.at("optimistic").get<bool>();
    sub.txs = j.at("txs").get<std::vector<std::string>>();
    sub.bid = amount_from(j.at("bid"));
    sub.revenue = amount_from(j.at("revenue"));
    return sub;
}

Json to_json(const SlotTrace& slot) {
    Json j;
    j["slot_id"] = slot.slot_id;
    if (slot.winning_block)
        j["winning_block"] = *slot.winning_block;
    else
        j["winning_block"] = nullptr;
    Json subs = Json::array();
    for (const auto& s : slot.submissions) subs.push_back(to_json(s));
    j["submissions"] = subs;
    j["transactions"] = slot.transactions;
    Json evs = Json::array();
    for (const auto& e : slot.mempool_events)
        evs.push_back({{"tx_id", e.tx_id},
                       {"channel_observation", e.channel_observation},
                       {"timestamp", e.timestamp}});
    j["mempool_events"] = evs;
    Json pools = Json::object();
    for (const auto& [pid, pool] : slot.pool_states_at_slot_start)
        pools[pid] = pool_to_json(pool);
    j["pool_states_at_slot_start"] = pools;
    return j;
}

SlotTrace slot_from_json(const Json& j) {
    SlotTrace slot;
    slot.slot_id = j.at("slot_id").get<uint64_t>();
    if (!j.at("winning_block").is_null())
        slot.winning_block = j.at("winning_block").get<std::string>();
    for (const auto& s : j.at("submissions")) slot.submissions.push_back(submission_from_json(s));
    slot.transactions = j.at("transactions").get<std::vector<std::string>>();
    for (const auto& e : j.at("mempool_events"))
        slot.mempool_events.push_back({e.at("tx_id").get<std::string>(),
                                       e.at("channel_observation").get<std::string>(),
                                       e.at("timestamp").get<double>()});
    for (const auto& [pid, pool] : j.at("pool_states_at_slot_start").items())
        slot.pool_states_at_slot_start[pid] = pool_from_json(pool);
    return slot;
}

void write_dataset(const std::filesystem::path& dir, const Dataset& d) {
    std::filesystem::create_directories(dir / "prices");

    {
        std::ofstream out(dir / "slots.jsonl");
        if (!out) throw std::runtime_error("cannot write " + (dir / "slots.jsonl").string());
        for (const auto& slot : d.slots) out << to_json(slot).dump() << "\n";
    }
    {
        std::ofstream out(dir / "transactions.jsonl");
        for (const auto& [id, tx] : d.transactions) out << to_json(tx).dump() << "\n";
    }
    for (const auto& [sym, trace] : d.prices)
        write_price_csv(dir / "prices" / (sym + ".csv"), trace);
    {
        Json meta;
        meta["seed"] = d.meta.seed;
        meta["config_digest"] = d.meta.config_digest;
        std::ofstream out(dir / "meta.json");
        out << meta.dump(2) << "\n";
    }
}

Dataset read_dataset(const std::filesystem::path& dir) {
    Dataset d;
    {
        std::ifstream in(dir / "slots.jsonl");
        if (!in) throw std::runtime_error("cannot open " + (dir / "slots.jsonl").string());
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            d.slots.push_back(slot_from_json(Json::parse(line)));
        }
    }
    {
        std::ifstream in(dir / "transactions.jsonl");
        if (!in) throw std::runtime_error("cannot open " + (dir / "transactions.jsonl").string());
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            Transaction tx = transaction_from_json(Json::parse(line));
            d.transactions[tx.tx_id] = std::move(tx);
        }
    }
    if (std::filesystem::exists(dir / "prices"))
        for (const auto& entry : std::filesystem::directory_iterator(dir / "prices")) {
            if (entry.path().extension() != ".csv") continue;
            const std::string sym = entry.path().stem().string();
            TokenPair pair;
            const auto dash = sym.find('-');
            if (dash != std::string::npos) {
                pair.base = sym.substr(0, dash);
                pair.quote = sym.substr(dash + 1);
            } else {
                pair.base = sym;
            }
            d.prices[sym] = load_price_csv(entry.path(), pair);
        }
    {
        std::ifstream in(dir / "meta.json");
        if (!in) throw std::runtime_error("cannot open " + (dir / "meta.json").string());
        Json meta = Json::parse(in);
        d.meta.seed = meta.at("seed").get<uint64_t>();
        d.meta.config_digest = meta.at("config_digest").get<std::string>();
    }
    return d;
}

}  // namespace pbs
