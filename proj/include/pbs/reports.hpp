#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "pbs/analytics.hpp"
#include "pbs/types.hpp"

namespace pbs {

// Bots and their integrated builders, inferred from the dataset: an origin
// with SearcherSwap transactions is a bot; its builder comes from the fee
// guard, falling back to the single target of its highest-fee copies.
std::map<std::string, std::string> infer_bots(const Dataset& d);

// Success on direction-vs-bot interactions, block timing and position, with
// transaction fixed effects.
RegressionResult panel_success_regression(const std::vector<PanelRow>& panel);
// p_norm on the same design, priced rows only.
RegressionResult panel_price_regression(const std::vector<PanelRow>& panel);

// Known report names: channels, revenue, delays, similarity, execution_panel,
// regressions, implied_prices. Throws std::invalid_argument on others.
void emit_report(const Dataset& d, const std::string& report,
                 const std::filesystem::path& out_dir);

}  // namespace pbs
