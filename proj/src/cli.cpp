#include "pbs/cli.hpp"

#include <charconv>
#include <ostream>

#include "pbs/amm.hpp"
#include "pbs/auction.hpp"
#include "pbs/config.hpp"
#include "pbs/dataset_io.hpp"
#include "pbs/reports.hpp"
#include "pbs/validate.hpp"

namespace pbs {

namespace {

std::string fmt(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

}  // namespace

int cmd_simulate(const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
                 std::ostream& err) {
    ScenarioConfig config;
    try {
        config = load_scenario(config_path);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 1;
    }
    try {
        write_dataset(out_dir, run_scenario(config));
    } catch (const std::exception& e) {
        err << "simulation failed: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

int cmd_analyze(const std::filesystem::path& dataset_dir, const std::string& report,
                const std::filesystem::path& out_dir, std::ostream& err) {
    Dataset d;
    try {
        d = read_dataset(dataset_dir);
    } catch (const std::exception& e) {
        err << "cannot read dataset: " << e.what() << "\n";
        return 2;
    }
    const auto violations = validate_dataset(d);
    if (!violations.empty()) {
        err << "dataset invalid: " << violations.size() << " violation(s), first: "
            << violations.front().code << " (" << violations.front().subject << ")\n";
        return 2;
    }
    try {
        emit_report(d, report, out_dir);
    } catch (const std::invalid_argument& e) {
        err << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "report failed: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

int cmd_replay(const std::filesystem::path& dataset_dir, const std::string& block_id,
               std::ostream& out, std::ostream& err) {
    Dataset d;
    try {
        d = read_dataset(dataset_dir);
    } catch (const std::exception& e) {
        err << "cannot read dataset: " << e.what() << "\n";
        return 2;
    }
    for (const auto& slot : d.slots) {
        for (const auto& sub : slot.submissions) {
            if (sub.block_id != block_id) continue;
            const BlockReplayResult result =
                replay_block(slot.pool_states_at_slot_start, sub, d.transactions);
            out << "block " << sub.block_id << " slot " << sub.slot_id << " builder "
                << sub.builder_id << " bid " << sub.bid.to_string() << " revenue "
                << sub.revenue.to_string() << "\n";
            for (const auto& rec : result.txs) {
                out << rec.position << " " << rec.tx_id << " ";
                switch (rec.status) {
                    case SwapStatus::Success: out << "Success"; break;
                    case SwapStatus::Reverted: out << "Reverted"; break;
                    case SwapStatus::Failed: out << "Failed"; break;
                }
                if (rec.is_swap && rec.status == SwapStatus::Success)
                    out << " out=" << rec.amount_out.to_string()
                        << " exec_price=" << fmt(rec.exec_price);
                out << "\n";
            }
            return 0;
        }
    }
    err << "unknown block '" << block_id << "'\n";
    return 1;
}

int cmd_validate(const std::filesystem::path& dataset_dir, std::ostream& out, std::ostream& err) {
    Dataset d;
    try {
        d = read_dataset(dataset_dir);
    } catch (const std::exception& e) {
        err << "cannot read dataset: " << e.what() << "\n";
        return 2;
    }
    const auto violations = validate_dataset(d);
    for (const auto& v : violations)
        out << v.code << " " << v.subject << (v.detail.empty() ? "" : " ") << v.detail << "\n";
    out << violations.size() << " violation(s)\n";
    return violations.empty() ? 0 : 2;
}

}  // namespace pbs
