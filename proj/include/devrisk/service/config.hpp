#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "devrisk/core/model.hpp"
#include "devrisk/identify/identifier.hpp"
#include "devrisk/score/config.hpp"

namespace devrisk::service {

struct ServiceConfig {
    std::string listen_host = "127.0.0.1";
    int listen_port = 8080;
    std::filesystem::path data_dir = "data";
    // Empty: keep the registry in memory only.
    std::filesystem::path store_path;
    std::optional<Date> default_as_of;
    score::ScoringConfig scoring;
    identify::IdentifierConfig identifier;
    bool persist_ingest = true;  // write ingested data back into data_dir
};

/// Parses "host:port" or ":port"; throws Error{Validation}.
void parse_listen(const std::string& text, ServiceConfig& config);

void from_json(const json& j, ServiceConfig& c);
void to_json(json& j, const ServiceConfig& c);

/// Reads a JSON config file (relative paths resolve against its directory)
/// and applies DEVRISK_LISTEN, DEVRISK_DATA_DIR, DEVRISK_STORE and
/// DEVRISK_AS_OF from the environment.
ServiceConfig load_service_config(const std::optional<std::filesystem::path>& path);
void apply_env_overrides(ServiceConfig& config);

}  // namespace devrisk::service
