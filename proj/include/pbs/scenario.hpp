#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pbs/agents.hpp"
#include "pbs/market_data.hpp"
#include "pbs/types.hpp"

namespace pbs {

struct RelayConfig {
    std::string relay_id{"relay"};
    double delay_median{0.76};  // log-normal simulation delay, seconds
    double delay_p75{1.5};
    double optimistic_prob{0.038};
    double broadcast_interval{0.2};  // top-bid announcements
    friend bool operator==(const RelayConfig&, const RelayConfig&) = default;
};

// Synthetic price source when no file is given.
struct PriceSourceConfig {
    std::string file;  // empty -> GBM
    double start_price{3500.0};
    double volatility{0.0005};  // per sqrt-second
    friend bool operator==(const PriceSourceConfig&, const PriceSourceConfig&) = default;
};

struct ScenarioConfig {
    uint64_t slot_count{1};
    uint64_t seed{0};
    RelayConfig relay;
    std::vector<BuilderConfig> builders;
    std::vector<SearcherConfig> searchers;
    UserFlowConfig user_flow;
    std::vector<PoolState> pools;
    std::map<std::string, PriceSourceConfig> prices;  // pair symbol -> source
    double proposer_request_time{12.0};
    bool include_failed{false};
    bool weighted_aggregation{false};
    CexFrictions cex;
    std::set<uint64_t> skipped_slots;  // slots whose auction is dropped
    std::string config_digest;         // of the source config text
};

}  // namespace pbs
