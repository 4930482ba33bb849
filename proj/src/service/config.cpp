#include "devrisk/service/config.hpp"

#include <cstdlib>

#include "devrisk/core/error.hpp"
#include "devrisk/core/io.hpp"

namespace devrisk::service {

void parse_listen(const std::string& text, ServiceConfig& config) {
    auto colon = text.rfind(':');
    if (colon == std::string::npos) throw Error(ErrorKind::Validation, "listen address must be host:port");
    std::string host = text.substr(0, colon);
    int port = 0;
    try {
        std::size_t used = 0;
        port = std::stoi(text.substr(colon + 1), &used);
        if (used != text.size() - colon - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        throw Error(ErrorKind::Validation, "bad port in listen address '" + text + "'");
    }
    if (port < 0 || port > 65535) throw Error(ErrorKind::Validation, "port out of range in '" + text + "'");
    if (!host.empty()) config.listen_host = host;
    config.listen_port = port;
}

void from_json(const json& j, ServiceConfig& c) {
    if (auto it = j.find("listen"); it != j.end()) parse_listen(it->get<std::string>(), c);
    if (auto it = j.find("data_dir"); it != j.end()) c.data_dir = it->get<std::string>();
    if (auto it = j.find("store"); it != j.end()) c.store_path = it->get<std::string>();
    if (auto it = j.find("as_of"); it != j.end() && !it->is_null()) c.default_as_of = it->get<Date>();
    if (auto it = j.find("scoring"); it != j.end()) it->get_to(c.scoring);
    if (auto it = j.find("identification"); it != j.end()) {
        c.identifier.decision.threshold = it->value("threshold", c.identifier.decision.threshold);
        c.identifier.decision.min_margin = it->value("min_margin", c.identifier.decision.min_margin);
        c.identifier.web.belief_cap = it->value("web_belief_cap", c.identifier.web.belief_cap);
        c.identifier.skew.total_belief = it->value("skew_total_belief", c.identifier.skew.total_belief);
    }
    c.persist_ingest = j.value("persist_ingest", c.persist_ingest);
}

void to_json(json& j, const ServiceConfig& c) {
    j = json{{"listen", c.listen_host + ":" + std::to_string(c.listen_port)},
             {"data_dir", c.data_dir.string()},
             {"store", c.store_path.string()},
             {"as_of", c.default_as_of ? json(*c.default_as_of) : json(nullptr)},
             {"scoring", c.scoring},
             {"identification",
              {{"threshold", c.identifier.decision.threshold},
               {"min_margin", c.identifier.decision.min_margin},
               {"web_belief_cap", c.identifier.web.belief_cap},
               {"skew_total_belief", c.identifier.skew.total_belief}}},
             {"persist_ingest", c.persist_ingest}};
}

void apply_env_overrides(ServiceConfig& config) {
    if (const char* v = std::getenv("DEVRISK_LISTEN"); v && *v) parse_listen(v, config);
    if (const char* v = std::getenv("DEVRISK_DATA_DIR"); v && *v) config.data_dir = v;
    if (const char* v = std::getenv("DEVRISK_STORE"); v) config.store_path = v;
    if (const char* v = std::getenv("DEVRISK_AS_OF"); v && *v) config.default_as_of = Date::parse(v);
}

ServiceConfig load_service_config(const std::optional<std::filesystem::path>& path) {
    ServiceConfig config;
    if (path) {
        config = io::convert<ServiceConfig>(io::read_json(*path), path->string(), ErrorKind::Validation);
        const auto base = path->parent_path();
        if (config.data_dir.is_relative()) config.data_dir = base / config.data_dir;
        if (!config.store_path.empty() && config.store_path.is_relative()) config.store_path = base / config.store_path;
    }
    apply_env_overrides(config);
    return config;
}

}  // namespace devrisk::service
