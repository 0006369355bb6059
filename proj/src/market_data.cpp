#include "pbs/market_data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace pbs {

double price_at_ms(const PriceTrace& trace, int64_t t_ms) {
    if (trace.points.empty()) throw std::out_of_range("price_at: empty trace");
    if (t_ms < trace.points.front().timestamp_ms)
        throw std::out_of_range("price_at: t before first sample");
    auto it = std::upper_bound(trace.points.begin(), trace.points.end(), t_ms,
                               [](int64_t t, const PricePoint& p) { return t < p.timestamp_ms; });
    return std::prev(it)->price;
}

double price_at(const PriceTrace& trace, double t_seconds) {
    return price_at_ms(trace, static_cast<int64_t>(std::floor(t_seconds * 1000.0)));
}

PriceTrace generate_gbm_trace(uint64_t seed, const TokenPair& pair, double start_price,
                              double volatility, double duration_s) {
    if (start_price <= 0.0 || volatility < 0.0 || duration_s < 0.0)
        throw std::invalid_argument("generate_gbm_trace: non-positive parameter");
    PriceTrace trace;
    trace.pair = pair;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double p = start_price;
    const int64_t n = static_cast<int64_t>(std::floor(duration_s));
    for (int64_t t = 0; t <= n; ++t) {
        trace.points.push_back({t * 1000, p});
        const double z = gauss(rng);
        p *= std::exp(volatility * z - 0.5 * volatility * volatility);
    }
    return trace;
}

namespace {

// Real-valued constant-product output for planning; execution uses the
// fixed-point path in amm.cpp.
double swap_out(double in_reserve, double out_reserve, double fee, double amount_in) {
    const double a = amount_in * (1.0 - fee);
    return out_reserve * a / (in_reserve + a);
}

struct Leg {
    SwapDirection direction;
    double amount_in;   // input-leg units
    double volume;      // base units
    double dex_price;   // quote per base
    double profit;      // quote units
};

// Profit of buying `q` quote worth of base on the DEX and selling the base on
// the CEX at p_cex net of frictions.
double buy_base_profit(const PoolState& pool, double q, double p_cex, const CexFrictions& fr) {
    const double x = pool.reserve_base.to_double();
    const double y = pool.reserve_quote.to_double();
    const double out = swap_out(y, x, pool.fee_rate(), q);
    const double p_sell = p_cex * (1.0 - fr.fee_bps / 1e4) - fr.linear_impact * out;
    return out * p_sell - q;
}

double sell_base_profit(const PoolState& pool, double a, double p_cex, const CexFrictions& fr) {
    const double x = pool.reserve_base.to_double();
    const double y = pool.reserve_quote.to_double();
    const double out = swap_out(x, y, pool.fee_rate(), a);
    const double p_buy = p_cex * (1.0 + fr.fee_bps / 1e4) + fr.linear_impact * a;
    return out - a * p_buy;
}

template <typename F>
double golden_max(F f, double lo, double hi) {
    constexpr double phi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < 200 && (b - a) > 1e-14 * std::max(1.0, hi); ++i) {
        if (fc > fd) {
            b = d; d = c; fd = fc;
            c = b - phi * (b - a); fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + phi * (b - a); fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

ArbPlan optimal_arb(const PoolState& pool, double p_cex, const CexFrictions& fr) {
    if (p_cex <= 0.0) throw std::invalid_argument("optimal_arb: p_cex must be positive");
    const double x = pool.reserve_base.to_double();
    const double y = pool.reserve_quote.to_double();
    const double f = pool.fee_rate();
    const double spot = y / x;

    ArbPlan plan;
    plan.pool_id = pool.pool_id;
    plan.cex_price = p_cex;

    const double p_sell = p_cex * (1.0 - fr.fee_bps / 1e4);  // CEX bid for the base leg
    const double p_buy = p_cex * (1.0 + fr.fee_bps / 1e4);   // CEX ask

    if (p_sell * (1.0 - f) > spot) {
        // Buy base on the DEX until the marginal price reaches the CEX bid.
        double q;
        if (fr.linear_impact == 0.0) {
            const double q_eff = std::sqrt(p_sell * x * y * (1.0 - f)) - y;
            q = q_eff / (1.0 - f);
        } else {
            const double q_hi = (std::sqrt(p_sell * x * y * (1.0 - f)) - y) / (1.0 - f);
            q = golden_max([&](double v) { return buy_base_profit(pool, v, p_cex, fr); }, 0.0, q_hi);
        }
        const double out = swap_out(y, x, f, q);
        if (out <= 0.0) return plan;
        plan.direction = SwapDirection::QuoteForBase;
        plan.amount_in = q;
        plan.volume = out;
        plan.expected_dex_price = q / out;
        plan.gross_profit = out * p_cex - q;
    } else if (p_buy < spot * (1.0 - f)) {
        // Sell base on the DEX, buy it back on the CEX.
        double a;
        if (fr.linear_impact == 0.0) {
            const double a_eff = std::sqrt((1.0 - f) * x * y / p_buy) - x;
            a = a_eff / (1.0 - f);
        } else {
            const double a_hi = (std::sqrt((1.0 - f) * x * y / p_buy) - x) / (1.0 - f);
            a = golden_max([&](double v) { return sell_base_profit(pool, v, p_cex, fr); }, 0.0, a_hi);
        }
        const double out = swap_out(x, y, f, a);
        if (a <= 0.0) return plan;
        plan.direction = SwapDirection::BaseForQuote;
        plan.amount_in = a;
        plan.volume = a;
        plan.expected_dex_price = out / a;
        plan.gross_profit = out - a * p_cex;
    }
    if (plan.gross_profit < 0.0) return ArbPlan{pool.pool_id, SwapDirection::QuoteForBase, 0, 0, 0, p_cex, 0};
    return plan;
}

PriceTrace load_price_csv(const std::filesystem::path& file, const TokenPair& pair) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open price file " + file.string());
    PriceTrace trace;
    trace.pair = pair;
    std::string line;
    if (!std::getline(in, line) || line.rfind("timestamp_ms,price", 0) != 0)
        throw std::runtime_error("bad price csv header in " + file.string());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("bad price csv row in " + file.string());
        PricePoint pt;
        pt.timestamp_ms = std::stoll(line.substr(0, comma));
        pt.price = std::stod(line.substr(comma + 1));
        trace.points.push_back(pt);
    }
    return trace;
}

void write_price_csv(const std::filesystem::path& file, const PriceTrace& trace) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write price file " + file.string());
    out << "timestamp_ms,price\n";
    char buf[32];
    for (const auto& pt : trace.points) {
        auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), pt.price);
        out << pt.timestamp_ms << "," << std::string_view(buf, end) << "\n";
    }
}

}  // namespace pbs
