#include "cli.hpp"

#include <cstdio>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "devrisk/core/error.hpp"
#include "devrisk/service/config.hpp"
#include "devrisk/service/http_api.hpp"
#include "devrisk/service/service.hpp"

#ifndef DEVRISK_FIXTURE_DIR
#define DEVRISK_FIXTURE_DIR "fixtures/study"
#endif

namespace devrisk::cli {

namespace {

namespace fs = std::filesystem;
using service::DeviceRiskService;
using service::ServiceConfig;

struct Options {
    std::string data_dir = "data";
    std::string store;
    std::string config;
    std::string as_of;
    std::string format = "table";
};

class Painter {
public:
    explicit Painter(bool enabled) : enabled_(enabled) {}

    std::string color(Color c) const {
        static constexpr const char* kWords[] = {"GREEN", "YELLOW", "RED"};
        static constexpr const char* kAnsi[] = {"\033[32m", "\033[33m", "\033[31m"};
        const auto i = static_cast<int>(c);
        if (!enabled_) return kWords[i];
        return std::string(kAnsi[i]) + kWords[i] + "\033[0m";
    }

private:
    bool enabled_;
};

std::optional<Date> parse_as_of(const std::string& text) {
    if (text.empty()) return std::nullopt;
    return Date::parse(text);
}

ServiceConfig make_config(const Options& o, CLI::App& app) {
    ServiceConfig config = service::load_service_config(
        o.config.empty() ? std::nullopt : std::optional<fs::path>(o.config));
    if (app.count("--data-dir") || o.config.empty()) config.data_dir = o.data_dir;
    if (!o.store.empty()) {
        config.store_path = o.store == ":memory:" ? fs::path{} : fs::path(o.store);
    } else if (config.store_path.empty() && !std::getenv("DEVRISK_STORE")) {
        config.store_path = config.data_dir / "store.json";
    }
    return config;
}

std::string fixed(double v, int digits) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << v;
    return s.str();
}

void print_assessment_table(std::ostream& out, const RiskAssessment& a, const Painter& paint) {
    out << "Device       " << a.device_id << "\n";
    out << "Identity     " << a.identity.to_string() << (a.version_assumed ? " (version assumed)" : "") << "\n";
    out << "As of        " << a.as_of.to_string() << "\n";
    out << "Current risk " << paint.color(color_of(a.current_risk)) << " " << to_string(a.current_risk);
    if (a.current_risk_basis) out << " (highest unpatched CVSS " << fixed(*a.current_risk_basis, 1) << ")";
    out << "\n";
    out << "Future risk  " << to_string(a.future_risk) << " (vulnerability trend " << to_string(a.vuln_trend)
        << ", patch trend " << to_string(a.patch_trend);
    if (a.patch_trend_mean_days) out << ", mean " << fixed(*a.patch_trend_mean_days, 1) << " days";
    out << ")\n";
    out << "Exceptional  " << a.exceptional_risks.size() << "\n";
    for (const auto& r : a.exceptional_risks) out << "  - " << r.description << "\n";
    out << "Vulnerabilities " << a.cve_table.size() << "\n";
    if (!a.cve_table.empty()) {
        out << "  " << std::left << std::setw(16) << "CVE" << std::setw(6) << "CVSS" << std::setw(9) << "Severity"
            << std::setw(12) << "Published" << "Patched in\n";
        for (const auto& v : a.cve_table) {
            out << "  " << std::left << std::setw(16) << v.cve_id << std::setw(6) << fixed(v.cvss_score, 1)
                << std::setw(9) << to_string(v.severity) << std::setw(12) << v.published.to_string()
                << v.patched_in.value_or("-") << "\n";
        }
    }
}

void print_guided(std::ostream& out, const json& view, const Painter& paint) {
    out << "Traffic light: " << paint.color(view.at("traffic_light").get<Color>()) << "\n\n";
    for (const auto& p : view.at("narrative")) out << p.get<std::string>() << "\n\n";
    for (const auto& icon : view.at("indicator_icons")) {
        out << "[" << paint.color(icon.at("color").get<Color>()) << "] " << icon.at("kind").get<std::string>() << ": "
            << icon.at("tooltip").get<std::string>() << "\n";
    }
}

void print_rich(std::ostream& out, const json& view, const Painter& paint) {
    const auto& risk = view.at("risk_score_panel");
    const auto& future = view.at("future_panel");
    out << "Device Risk Score: " << paint.color(risk.at("color").get<Color>()) << " "
        << risk.at("current_risk").get<std::string>() << "\n";
    for (const auto& v : risk.at("cve_table")) {
        out << "  " << v.at("cve_id").get<std::string>() << "  " << fixed(v.at("cvss_score").get<double>(), 1) << "  "
            << v.at("severity").get<std::string>() << "\n";
    }
    for (const auto& r : risk.at("exceptional_risks")) out << "  ! " << r.at("description").get<std::string>() << "\n";
    out << "Future Risk Estimation: " << future.at("future_risk").get<std::string>() << "\n";
    out << "  Firmware Vulnerability Trend: " << future.at("vuln_trend").get<std::string>() << "\n";
    out << "  Model Patch Trend: " << future.at("patch_trend").get<std::string>() << "\n";
    out << "  Patches per year:";
    for (const auto& [year, n] : future.at("trend_series").at("patches_per_year").items()) {
        out << " " << year << "=" << n.get<int>();
    }
    out << "\n  Vulnerabilities per year:";
    for (const auto& [year, n] : future.at("trend_series").at("vulns_per_year").items()) {
        out << " " << year << "=" << n.get<int>();
    }
    out << "\n";
}

int run_demo(const Options& o, const std::string& fixtures, std::ostream& out, const Painter& paint) {
    ServiceConfig config;
    config.data_dir = fixtures;
    config.persist_ingest = false;
    config.default_as_of = parse_as_of(o.as_of);
    DeviceRiskService svc(config);

    const auto scenario = svc.knowledge().snapshot()->scenario.devices;
    json all = json::array();
    if (o.format != "json") {
        out << std::left << std::setw(4) << "#" << std::setw(12) << "Device" << std::setw(16) << "Type"
            << std::setw(10) << "Category" << std::setw(30) << "Identity" << std::setw(9) << "Current"
            << std::setw(9) << "Future" << "Light\n";
    }
    int row = 0;
    for (const auto& d : scenario) {
        auto a = svc.run_assessment(d.device_id);
        ++row;
        if (o.format == "json") {
            all.push_back(a);
            continue;
        }
        out << std::left << std::setw(4) << row << std::setw(12) << d.device_id << std::setw(16) << d.device_type
            << std::setw(10) << to_string(d.category) << std::setw(30) << a.identity.to_string() << std::setw(9)
            << to_string(a.current_risk) << std::setw(9) << to_string(a.future_risk)
            << paint.color(color_of(a.current_risk)) << "\n";
    }
    if (o.format == "json") out << all.dump() << "\n";
    return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err, bool color) {
    Options o;
    Painter paint(color);
    CLI::App app{"Device risk assessment: identify, enrich, score and serve."};
    app.require_subcommand(1);
    app.add_option("--data-dir", o.data_dir, "Data directory (feed, manifests, signatures, corpora, ...)");
    app.add_option("--store", o.store, "Registry file (default <data-dir>/store.json; ':memory:' for none)");
    app.add_option("--config", o.config, "Service config file (JSON)");

    auto* ingest = app.add_subcommand("ingest", "Validate and add reference data to the data directory");
    std::string ingest_kind, ingest_path;
    ingest->add_option("kind", ingest_kind)->required()->check(
        CLI::IsMember({"feed", "manifests", "signatures", "profiles"}));
    ingest->add_option("path", ingest_path)->required();

    auto* reg = app.add_subcommand("register", "Register a device");
    DeviceRecord record;
    std::string category;
    reg->add_option("--address", record.network_address)->required();
    reg->add_option("--category", category)->required()->check(CLI::IsMember({"business", "private"}));
    reg->add_option("--owner", record.owner)->required();
    reg->add_option("--type", record.device_type);
    reg->add_option("--id", record.device_id);

    auto* identify = app.add_subcommand("identify", "Identify a device from a web corpus and/or a TCP timestamp trace");
    std::string corpus_path, trace_path;
    identify->add_option("--corpus", corpus_path);
    identify->add_option("--trace", trace_path);
    identify->add_option("--as-of", o.as_of);

    auto* assess = app.add_subcommand("assess", "Run the assessment pipeline for a registered device");
    std::string device_id;
    assess->add_option("--device", device_id)->required();
    assess->add_option("--as-of", o.as_of);
    assess->add_option("--format", o.format)->check(CLI::IsMember({"json", "table"}));

    auto* view = app.add_subcommand("view", "Show the guided or rich view of a device");
    std::string version = "guided";
    view->add_option("--device", device_id)->required();
    view->add_option("--version", version)->check(CLI::IsMember({"guided", "rich"}));
    view->add_option("--as-of", o.as_of, "Assessment date used when the device was never assessed");
    view->add_option("--format", o.format)->check(CLI::IsMember({"json", "table"}));

    auto* list = app.add_subcommand("list", "List registered devices with their risk");
    std::string owner_filter, category_filter;
    list->add_option("--owner", owner_filter);
    list->add_option("--category", category_filter)->check(CLI::IsMember({"business", "private"}));
    list->add_option("--format", o.format)->check(CLI::IsMember({"json", "table"}));

    auto* compare = app.add_subcommand("compare", "Compare the catalog models of a category");
    std::string label;
    compare->add_option("--category", label)->required();
    compare->add_option("--as-of", o.as_of);
    compare->add_option("--format", o.format)->check(CLI::IsMember({"json", "table"}));

    auto* serve = app.add_subcommand("serve", "Run the HTTP service");
    std::string listen;
    serve->add_option("--listen", listen, "host:port");

    auto* demo = app.add_subcommand("demo", "Assess the six study devices from the bundled fixtures");
    std::string fixtures = DEVRISK_FIXTURE_DIR;
    demo->add_option("--fixtures", fixtures);
    demo->add_option("--as-of", o.as_of);
    demo->add_option("--format", o.format)->check(CLI::IsMember({"json", "table"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitOk;
        }
        err << "error: " << e.what() << "\n" << "run with --help for usage\n";
        return kExitUsage;
    }

    try {
        if (*demo) return run_demo(o, fixtures, out, paint);

        ServiceConfig config = make_config(o, app);
        if (*serve) {
            if (!listen.empty()) service::parse_listen(listen, config);
            DeviceRiskService svc(config);
            service::serve(svc, config.listen_host, config.listen_port);
            return kExitOk;
        }

        DeviceRiskService svc(config);
        const auto as_of = parse_as_of(o.as_of);

        if (*ingest) {
            auto& kb = svc.knowledge();
            service::IngestReport report;
            if (ingest_kind == "feed") {
                report = kb.ingest_feed_file(ingest_path);
            } else if (ingest_kind == "manifests") {
                report = kb.ingest_manifests_path(ingest_path);
            } else if (ingest_kind == "signatures") {
                report = kb.ingest_signatures_file(ingest_path);
            } else {
                report = kb.ingest_profiles_file(ingest_path);
            }
            out << "ingested " << report.received << " " << report.kind << " (" << report.total << " total)\n";
            return kExitOk;
        }
        if (*reg) {
            record.category = parse_device_category(category);
            auto [id, created] = svc.register_device(record);
            out << id << (created ? "" : " (already registered)") << "\n";
            return kExitOk;
        }
        if (*identify) {
            if (corpus_path.empty() && trace_path.empty()) {
                err << "error: identify needs --corpus and/or --trace\n";
                return kExitUsage;
            }
            std::optional<identify::WebCorpus> corpus;
            std::optional<identify::TimestampTrace> trace;
            if (!corpus_path.empty()) corpus = identify::load_corpus(corpus_path);
            if (!trace_path.empty()) trace = identify::load_trace(trace_path);
            auto result = svc.identify(corpus ? &*corpus : nullptr, trace ? &*trace : nullptr, as_of);
            out << json(result).dump(2) << "\n";
            return result.resolved ? kExitOk : kExitData;
        }
        if (*assess) {
            auto a = svc.run_assessment(device_id, as_of);
            if (o.format == "json") {
                out << json(a).dump() << "\n";
            } else {
                print_assessment_table(out, a, paint);
            }
            return kExitOk;
        }
        if (*view) {
            if (svc.get_device(device_id).status == service::DeviceStatus::Registered) {
                err << "note: " << device_id << " was never assessed; assessing now\n";
                svc.run_assessment(device_id, as_of);
            }
            auto v = svc.get_view(device_id, service::parse_view_version(version));
            if (o.format == "json") {
                out << v.dump() << "\n";
            } else if (version == "guided") {
                print_guided(out, v, paint);
            } else {
                print_rich(out, v, paint);
            }
            return kExitOk;
        }
        if (*list) {
            std::optional<std::string> owner;
            std::optional<DeviceCategory> cat;
            if (!owner_filter.empty()) owner = owner_filter;
            if (!category_filter.empty()) cat = parse_device_category(category_filter);
            auto rows = svc.list_devices(owner, cat);
            if (o.format == "json") {
                out << rows.dump() << "\n";
                return kExitOk;
            }
            for (const auto& r : rows) {
                out << std::left << std::setw(16) << r.at("device_id").get<std::string>() << std::setw(16)
                    << r.at("device_type").get<std::string>() << std::setw(10) << r.at("category").get<std::string>()
                    << std::setw(14) << r.at("status").get<std::string>()
                    << (r.at("color").is_null() ? std::string("-") : paint.color(r.at("color").get<Color>())) << "\n";
            }
            return kExitOk;
        }
        if (*compare) {
            auto result = svc.compare_category(label, as_of);
            if (o.format == "json") {
                out << result.dump() << "\n";
                return kExitOk;
            }
            for (const auto& c : result.at("cards")) {
                out << std::left << std::setw(24) << c.at("name").get<std::string>() << std::setw(8)
                    << c.at("firmware_version").get<std::string>() << paint.color(c.at("color").get<Color>())
                    << "  future " << c.at("future_risk").get<std::string>() << "\n";
            }
            return kExitOk;
        }
    } catch (const Error& e) {
        err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
        return kExitData;
    } catch (const json::exception& e) {
        err << "error (malformed_input): " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}

}  // namespace devrisk::cli
