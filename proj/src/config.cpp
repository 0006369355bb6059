#include "pbs/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace pbs {

namespace {

using Json = nlohmann::json;

void require_keys(const Json& j, const std::string& where,
                  const std::set<std::string>& allowed) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [key, _] : j.items())
        if (!allowed.contains(key))
            throw ConfigError(where + ": unknown key '" + key + "'");
}

PiecewiseSchedule schedule_from(const Json& j, const std::string& where) {
    PiecewiseSchedule s;
    if (!j.is_array()) throw ConfigError(where + ": expected an array of [t, value] pairs");
    for (const auto& pt : j) {
        if (!pt.is_array() || pt.size() != 2)
            throw ConfigError(where + ": expected [t, value] pairs");
        s.points.emplace_back(pt[0].get<double>(), pt[1].get<double>());
    }
    return s;
}

template <typename T>
T get_or(const Json& j, const std::string& key, T fallback) {
    return j.contains(key) ? j.at(key).get<T>() : fallback;
}

SearcherConfig searcher_from(const Json& j) {
    require_keys(j, "searchers[]",
                 {"bot_id", "integrated_with", "also_submits_to", "margin", "reaction_latency",
                  "risk_discount", "pools", "decision_rate", "decision_ramp", "min_fee",
                  "revert_tolerance", "fee_guard"});
    SearcherConfig c;
    c.bot_id = j.at("bot_id").get<std::string>();
    c.integrated_with = j.at("integrated_with").get<std::string>();
    if (j.contains("also_submits_to"))
        for (const auto& b : j.at("also_submits_to")) c.also_submits_to.insert(b.get<std::string>());
    c.margin = get_or(j, "margin", c.margin);
    c.reaction_latency = get_or(j, "reaction_latency", c.reaction_latency);
    if (j.contains("risk_discount"))
        c.risk_discount = schedule_from(j.at("risk_discount"), "searchers[].risk_discount");
    if (j.contains("pools"))
        for (const auto& p : j.at("pools")) c.pools.push_back(p.get<std::string>());
    c.decision_rate = get_or(j, "decision_rate", c.decision_rate);
    c.decision_ramp = get_or(j, "decision_ramp", c.decision_ramp);
    c.min_fee = get_or(j, "min_fee", c.min_fee);
    c.revert_tolerance = get_or(j, "revert_tolerance", c.revert_tolerance);
    c.fee_guard = get_or(j, "fee_guard", c.fee_guard);
    if (c.margin < 0.0) throw ConfigError("searchers[].margin: must be >= 0");
    return c;
}

BuilderConfig builder_from(const Json& j) {
    require_keys(j, "builders[]",
                 {"builder_id", "relay_latencies", "resubmit_interval", "retained_share",
                  "sees_public", "public_latency", "direct_latency"});
    BuilderConfig c;
    c.builder_id = j.at("builder_id").get<std::string>();
    if (j.contains("relay_latencies"))
        for (const auto& [relay, lat] : j.at("relay_latencies").items())
            c.relay_latencies[relay] = lat.get<double>();
    c.resubmit_interval = get_or(j, "resubmit_interval", c.resubmit_interval);
    if (c.resubmit_interval <= 0.0) throw ConfigError("builders[].resubmit_interval: must be > 0");
    if (j.contains("retained_share"))
        c.retained_share = schedule_from(j.at("retained_share"), "builders[].retained_share");
    c.sees_public = get_or(j, "sees_public", c.sees_public);
    c.public_latency = get_or(j, "public_latency", c.public_latency);
    c.direct_latency = get_or(j, "direct_latency", c.direct_latency);
    return c;
}

UserFlowConfig user_flow_from(const Json& j) {
    require_keys(j, "user_flow",
                 {"swap_rate", "private_rate", "transfer_share", "failing_share", "misroute_prob",
                  "misroute_target", "private_targets", "fallback_after_losses",
                  "swap_size_eth_log_mean", "swap_size_eth_log_sigma", "fee_min", "fee_max",
                  "slippage_tolerance", "pools"});
    UserFlowConfig c;
    c.swap_rate = get_or(j, "swap_rate", c.swap_rate);
    c.private_rate = get_or(j, "private_rate", c.private_rate);
    c.transfer_share = get_or(j, "transfer_share", c.transfer_share);
    c.failing_share = get_or(j, "failing_share", c.failing_share);
    c.misroute_prob = get_or(j, "misroute_prob", c.misroute_prob);
    c.misroute_target = get_or<std::string>(j, "misroute_target", "");
    if (j.contains("private_targets"))
        for (const auto& b : j.at("private_targets")) c.private_targets.insert(b.get<std::string>());
    c.fallback_after_losses = get_or<size_t>(j, "fallback_after_losses", c.fallback_after_losses);
    c.swap_size_eth_log_mean = get_or(j, "swap_size_eth_log_mean", c.swap_size_eth_log_mean);
    c.swap_size_eth_log_sigma = get_or(j, "swap_size_eth_log_sigma", c.swap_size_eth_log_sigma);
    c.fee_min = get_or(j, "fee_min", c.fee_min);
    c.fee_max = get_or(j, "fee_max", c.fee_max);
    c.slippage_tolerance = get_or(j, "slippage_tolerance", c.slippage_tolerance);
    if (j.contains("pools"))
        for (const auto& p : j.at("pools")) c.pools.push_back(p.get<std::string>());
    for (double p : {c.transfer_share, c.failing_share, c.misroute_prob})
        if (p < 0.0 || p > 1.0) throw ConfigError("user_flow: probabilities must be in [0,1]");
    return c;
}

PoolState pool_from(const Json& j) {
    require_keys(j, "pools[]", {"pool_id", "base", "quote", "reserve_base", "reserve_quote",
                                "fee_ppm"});
    PoolState p;
    p.pool_id = j.at("pool_id").get<std::string>();
    p.pair.base = j.at("base").get<std::string>();
    p.pair.quote = j.at("quote").get<std::string>();
    auto parse_amt = [&](const std::string& key) {
        const Json& v = j.at(key);
        if (v.is_string()) {
            auto a = Amount::parse(v.get<std::string>());
            if (!a) throw ConfigError("pools[]." + key + ": bad decimal '" + v.get<std::string>() + "'");
            return *a;
        }
        return Amount::from_double(v.get<double>());
    };
    p.reserve_base = parse_amt("reserve_base");
    p.reserve_quote = parse_amt("reserve_quote");
    p.fee_ppm = get_or<uint32_t>(j, "fee_ppm", 3000);
    if (p.reserve_base <= Amount{} || p.reserve_quote <= Amount{})
        throw ConfigError("pools[]." + p.pool_id + ": reserves must be positive");
    if (p.pair.base == p.pair.quote)
        throw ConfigError("pools[]." + p.pool_id + ": base must differ from quote");
    return p;
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    require_keys(j, "config",
                 {"slot_count", "seed", "relay", "builders", "searchers", "user_flow", "pools",
                  "prices", "proposer_request_time", "include_failed", "weighted_aggregation",
                  "cex_fee_bps", "cex_linear_impact", "skipped_slots"});

    ScenarioConfig c;
    if (!j.contains("seed")) throw ConfigError("config: 'seed' is mandatory");
    c.seed = j.at("seed").get<uint64_t>();
    c.slot_count = get_or<uint64_t>(j, "slot_count", 1);

    if (j.contains("relay")) {
        const Json& r = j.at("relay");
        require_keys(r, "relay", {"relay_id", "delay_median", "delay_p75", "optimistic_prob",
                                  "broadcast_interval"});
        c.relay.relay_id = get_or<std::string>(r, "relay_id", c.relay.relay_id);
        c.relay.delay_median = get_or(r, "delay_median", c.relay.delay_median);
        c.relay.delay_p75 = get_or(r, "delay_p75", c.relay.delay_p75);
        c.relay.optimistic_prob = get_or(r, "optimistic_prob", c.relay.optimistic_prob);
        c.relay.broadcast_interval = get_or(r, "broadcast_interval", c.relay.broadcast_interval);
        if (c.relay.optimistic_prob < 0.0 || c.relay.optimistic_prob > 1.0)
            throw ConfigError("relay.optimistic_prob: must be in [0,1]");
        if (c.relay.delay_median < 0.0) throw ConfigError("relay.delay_median: must be >= 0");
    }

    std::set<std::string> ids;
    if (j.contains("builders"))
        for (const auto& b : j.at("builders")) {
            BuilderConfig bc = builder_from(b);
            if (!ids.insert(bc.builder_id).second)
                throw ConfigError("builders[]: duplicate builder_id '" + bc.builder_id + "'");
            c.builders.push_back(std::move(bc));
        }
    if (j.contains("searchers"))
        for (const auto& s : j.at("searchers")) {
            SearcherConfig sc = searcher_from(s);
            if (!ids.insert(sc.bot_id).second)
                throw ConfigError("searchers[]: duplicate bot_id '" + sc.bot_id + "'");
            c.searchers.push_back(std::move(sc));
        }
    if (j.contains("user_flow")) c.user_flow = user_flow_from(j.at("user_flow"));
    if (j.contains("pools"))
        for (const auto& p : j.at("pools")) {
            PoolState ps = pool_from(p);
            if (!ids.insert(ps.pool_id).second)
                throw ConfigError("pools[]: duplicate pool_id '" + ps.pool_id + "'");
            c.pools.push_back(std::move(ps));
        }
    if (j.contains("prices"))
        for (const auto& [sym, src] : j.at("prices").items()) {
            require_keys(src, "prices." + sym, {"file", "start_price", "volatility"});
            PriceSourceConfig ps;
            ps.file = get_or<std::string>(src, "file", "");
            ps.start_price = get_or(src, "start_price", ps.start_price);
            ps.volatility = get_or(src, "volatility", ps.volatility);
            c.prices[sym] = ps;
        }
    c.proposer_request_time = get_or(j, "proposer_request_time", c.proposer_request_time);
    c.include_failed = get_or(j, "include_failed", c.include_failed);
    c.weighted_aggregation = get_or(j, "weighted_aggregation", c.weighted_aggregation);
    c.cex.fee_bps = get_or(j, "cex_fee_bps", 0.0);
    c.cex.linear_impact = get_or(j, "cex_linear_impact", 0.0);
    if (j.contains("skipped_slots"))
        for (const auto& s : j.at("skipped_slots")) c.skipped_slots.insert(s.get<uint64_t>());

    // referential checks
    for (const auto& s : c.searchers) {
        if (!ids.contains(s.integrated_with))
            throw ConfigError("searchers[]." + s.bot_id + ": unknown integrated_with '" +
                              s.integrated_with + "'");
        for (const auto& p : s.pools)
            if (!ids.contains(p))
                throw ConfigError("searchers[]." + s.bot_id + ": unknown pool '" + p + "'");
    }
    for (const auto& p : c.user_flow.pools)
        if (!ids.contains(p)) throw ConfigError("user_flow.pools: unknown pool '" + p + "'");
    if (!c.user_flow.misroute_target.empty() && !ids.contains(c.user_flow.misroute_target))
        throw ConfigError("user_flow.misroute_target: unknown builder '" +
                          c.user_flow.misroute_target + "'");

    std::ostringstream digest;
    digest << std::hex << fnv1a(text);
    c.config_digest = digest.str();
    return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open config file " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

}  // namespace pbs
