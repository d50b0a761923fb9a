#include "clmm/errors.hpp"
#include "clmm/pool.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace clmm {

PoolConfig parse_pool_config(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(0, "<document>", e.what());
    }
    if (!doc.is_object()) throw ParseError(0, "<document>", "pool config must be a JSON object");

    auto number = [&](const char* key) -> double {
        if (!doc.contains(key)) throw ParseError(0, key, "missing required key");
        if (!doc[key].is_number()) throw ParseError(0, key, "expected a number");
        return doc[key].get<double>();
    };

    PoolConfig config;
    const double fee = number("fee");
    try {
        config.tier = doc.contains("tick_spacing")
                          ? FeeTier::from_fee(fee, doc["tick_spacing"].get<std::int32_t>())
                          : FeeTier::from_fee(fee);
    } catch (const nlohmann::json::exception&) {
        throw ParseError(0, "tick_spacing", "expected an integer");
    } catch (const DomainError& e) {
        throw ParseError(0, is_admissible_fee(fee) ? "tick_spacing" : "fee", e.what());
    }
    config.initial_price = number("initial_price");
    if (!(config.initial_price > 0.0)) throw ParseError(0, "initial_price", "must be positive");
    if (doc.contains("tick_bound")) {
        if (!doc["tick_bound"].is_number_integer()) throw ParseError(0, "tick_bound", "expected an integer");
        config.tick_bound = doc["tick_bound"].get<Tick>();
        if (config.tick_bound < 1 || config.tick_bound > kDefaultTickBound) {
            throw ParseError(0, "tick_bound", "must lie in [1, 887272]");
        }
    }
    return config;
}

PoolConfig load_pool_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open pool config " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_pool_config(text.str());
}

}  // namespace clmm
