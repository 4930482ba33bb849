#include "devrisk/identify/web_match.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <regex>

#include "devrisk/core/error.hpp"
#include "devrisk/core/io.hpp"

namespace devrisk::identify {

namespace {

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
           });
}

class CompiledPattern {
public:
    explicit CompiledPattern(const WebPattern& p) : pattern_(p) {
        if (p.is_regex) regex_.emplace(p.expression, std::regex::ECMAScript);
    }

    bool matches(const WebCorpus& corpus) const {
        for (const auto& page : corpus.pages) {
            switch (pattern_.location) {
                case PatternLocation::Body:
                    if (test(page.body)) return true;
                    break;
                case PatternLocation::Url:
                    if (test(page.url)) return true;
                    break;
                case PatternLocation::Header:
                    for (const auto& [name, value] : page.headers) {
                        if (iequals(name, pattern_.header_name) && test(value)) return true;
                    }
                    break;
            }
        }
        return false;
    }

private:
    bool test(const std::string& text) const {
        if (regex_) return std::regex_search(text, *regex_);
        return text.find(pattern_.expression) != std::string::npos;
    }

    const WebPattern& pattern_;
    std::optional<std::regex> regex_;
};

}  // namespace

double FingerprintSignature::total_weight() const {
    double sum = 0.0;
    for (const auto& p : patterns) sum += p.weight;
    return sum;
}

double matched_fraction(const WebCorpus& corpus, const FingerprintSignature& signature) {
    const double total = signature.total_weight();
    if (total <= 0.0) return 0.0;
    double matched = 0.0;
    for (const auto& p : signature.patterns) {
        if (CompiledPattern(p).matches(corpus)) matched += p.weight;
    }
    return matched / total;
}

Opinion match_web_patterns(const WebCorpus& corpus, const std::vector<FingerprintSignature>& signatures,
                           const WebMatchConfig& config) {
    if (signatures.empty()) {
        throw Error(ErrorKind::Validation, "signature database is empty");
    }
    if (corpus.pages.empty()) {
        throw Error(ErrorKind::EmptyCorpus, "web corpus for '" + corpus.device_id + "' has no pages");
    }

    std::map<ModelIdentity, double> fractions;
    double max_f = 0.0;
    for (const auto& sig : signatures) {
        double f = matched_fraction(corpus, sig);
        if (f <= 0.0) continue;
        fractions[sig.identity] += f;
        max_f = std::max(max_f, f);
    }
    if (fractions.empty()) return Opinion::vacuous();

    double sum_f = 0.0;
    for (const auto& [id, f] : fractions) sum_f += f;
    const double total_belief = std::min(max_f, config.belief_cap);

    Opinion out;
    const double rate = 1.0 / static_cast<double>(fractions.size());
    for (const auto& [id, f] : fractions) {
        out.hypotheses.push_back(id);
        out.belief.push_back(total_belief * f / sum_f);
        out.base_rate.push_back(rate);
    }
    out.uncertainty = 1.0 - total_belief;
    return out;
}

void from_json(const json& j, WebPattern& p) {
    auto loc = j.at("location").get<std::string>();
    if (loc == "body") {
        p.location = PatternLocation::Body;
    } else if (loc == "url") {
        p.location = PatternLocation::Url;
    } else if (loc == "header") {
        p.location = PatternLocation::Header;
        j.at("header").get_to(p.header_name);
    } else {
        throw Error(ErrorKind::MalformedInput, "unknown pattern location '" + loc + "'");
    }
    if (j.contains("regex")) {
        p.is_regex = true;
        j.at("regex").get_to(p.expression);
        try {
            std::regex check(p.expression, std::regex::ECMAScript);
        } catch (const std::regex_error& e) {
            throw Error(ErrorKind::MalformedInput, "invalid regex '" + p.expression + "': " + e.what());
        }
    } else {
        p.is_regex = false;
        j.at("literal").get_to(p.expression);
    }
    p.weight = j.value("weight", 1.0);
    if (!(p.weight > 0.0)) throw Error(ErrorKind::MalformedInput, "pattern weight must be positive");
}

void to_json(json& j, const WebPattern& p) {
    static constexpr const char* kNames[] = {"body", "header", "url"};
    j = json{{"location", kNames[static_cast<int>(p.location)]}, {"weight", p.weight}};
    if (p.location == PatternLocation::Header) j["header"] = p.header_name;
    j[p.is_regex ? "regex" : "literal"] = p.expression;
}

void from_json(const json& j, FingerprintSignature& s) {
    j.at("signature_id").get_to(s.signature_id);
    j.at("identity").get_to(s.identity);
    j.at("patterns").get_to(s.patterns);
    if (s.patterns.empty()) {
        throw Error(ErrorKind::MalformedInput, "signature '" + s.signature_id + "' has no patterns");
    }
}

void to_json(json& j, const FingerprintSignature& s) {
    j = json{{"signature_id", s.signature_id}, {"identity", s.identity}, {"patterns", s.patterns}};
}

void from_json(const json& j, WebPage& p) {
    j.at("url").get_to(p.url);
    p.status = j.value("status", 200);
    p.headers = j.value("headers", std::map<std::string, std::string>{});
    p.body = j.value("body", std::string{});
}

void to_json(json& j, const WebPage& p) {
    j = json{{"url", p.url}, {"status", p.status}, {"headers", p.headers}, {"body", p.body}};
}

void from_json(const json& j, WebCorpus& c) {
    c.device_id = j.value("device_id", std::string{});
    c.pages = j.value("pages", std::vector<WebPage>{});
}

void to_json(json& j, const WebCorpus& c) { j = json{{"device_id", c.device_id}, {"pages", c.pages}}; }

std::vector<FingerprintSignature> parse_signatures(const json& j) {
    if (!j.is_array()) throw Error(ErrorKind::MalformedInput, "signature database must be a JSON array");
    auto sigs = io::convert<std::vector<FingerprintSignature>>(j, "signature database");
    std::sort(sigs.begin(), sigs.end(),
              [](const auto& a, const auto& b) { return a.signature_id < b.signature_id; });
    auto dup = std::adjacent_find(sigs.begin(), sigs.end(),
                                  [](const auto& a, const auto& b) { return a.signature_id == b.signature_id; });
    if (dup != sigs.end()) {
        throw Error(ErrorKind::MalformedInput, "duplicate signature id '" + dup->signature_id + "'");
    }
    return sigs;
}

std::vector<FingerprintSignature> load_signatures(const std::filesystem::path& path) {
    return parse_signatures(io::read_json(path));
}

WebCorpus load_corpus(const std::filesystem::path& path) {
    return io::convert<WebCorpus>(io::read_json(path), path.string());
}

}  // namespace devrisk::identify
