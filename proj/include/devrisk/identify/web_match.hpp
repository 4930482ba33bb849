#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "devrisk/core/model.hpp"
#include "devrisk/identify/opinion.hpp"

namespace devrisk::identify {

enum class PatternLocation { Body, Header, Url };

struct WebPattern {
    PatternLocation location = PatternLocation::Body;
    std::string header_name;  // for PatternLocation::Header, matched case-insensitively
    bool is_regex = false;
    std::string expression;   // literal substring or ECMAScript regex
    double weight = 1.0;
};

struct FingerprintSignature {
    std::string signature_id;
    ModelIdentity identity;  // firmware_version may be "*"
    std::vector<WebPattern> patterns;

    double total_weight() const;
};

struct WebPage {
    std::string url;
    int status = 200;
    std::map<std::string, std::string> headers;
    std::string body;
};

struct WebCorpus {
    std::string device_id;
    std::vector<WebPage> pages;
};

struct WebMatchConfig {
    double belief_cap = 0.95;
};

/// Evidence from characteristic web patterns.
///
/// Each signature scores f = matched weight / total weight. Signatures with
/// f > 0 become hypotheses whose belief is proportional to f, scaled so the
/// total belief equals min(max f, belief_cap). Throws Error{EmptyCorpus} for
/// a corpus without pages; no match at all yields the vacuous opinion.
Opinion match_web_patterns(const WebCorpus& corpus, const std::vector<FingerprintSignature>& signatures,
                           const WebMatchConfig& config = {});

/// Matched-weight fraction of a single signature against a corpus.
double matched_fraction(const WebCorpus& corpus, const FingerprintSignature& signature);

void from_json(const json& j, WebPattern& p);
void to_json(json& j, const WebPattern& p);
void from_json(const json& j, FingerprintSignature& s);
void to_json(json& j, const FingerprintSignature& s);
void from_json(const json& j, WebPage& p);
void to_json(json& j, const WebPage& p);
void from_json(const json& j, WebCorpus& c);
void to_json(json& j, const WebCorpus& c);

/// Parses and validates a signature database (JSON array).
std::vector<FingerprintSignature> parse_signatures(const json& j);
std::vector<FingerprintSignature> load_signatures(const std::filesystem::path& path);
WebCorpus load_corpus(const std::filesystem::path& path);

}  // namespace devrisk::identify
