#include "test_support.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "devrisk/service/http_api.hpp"
#include "devrisk/service/service.hpp"

namespace devrisk::testing {

namespace fs = std::filesystem;

TempDir::TempDir() {
    std::string pattern = (fs::temp_directory_path() / "devrisk-test-XXXXXX").string();
    if (!::mkdtemp(pattern.data())) throw std::runtime_error("mkdtemp failed");
    path_ = pattern;
}

TempDir::~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
}

fs::path fixture_dir() { return DEVRISK_FIXTURE_DIR; }

void copy_fixtures(const fs::path& dest) {
    fs::create_directories(dest);
    fs::copy(fixture_dir(), dest, fs::copy_options::recursive | fs::copy_options::overwrite_existing);
}

identify::TimestampTrace synthetic_trace(const TraceSpec& spec, std::mt19937_64* rng) {
    identify::TimestampTrace trace;
    trace.tsval_frequency_hz = spec.frequency_hz;
    std::normal_distribution<double> jitter(0.0, spec.jitter_s > 0.0 ? spec.jitter_s : 1.0);
    const double rate = spec.frequency_hz * (1.0 + spec.skew_ppm * 1e-6);
    for (std::size_t i = 0; i < spec.samples; ++i) {
        const double t = spec.step_s * static_cast<double>(i);
        const auto ticks = static_cast<std::uint64_t>(std::llround(rate * t));
        identify::TimestampSample s;
        s.tsval = static_cast<std::uint32_t>(spec.start_tsval + ticks);
        s.capture_time_s = t + (spec.jitter_s > 0.0 && rng ? jitter(*rng) : 0.0);
        trace.samples.push_back(s);
    }
    return trace;
}

identify::Opinion random_opinion(std::mt19937_64& rng, int pool) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<ModelIdentity> ids;
    for (int i = 0; i < pool; ++i) {
        if (unit(rng) < 0.6) ids.push_back({"Vendor", "M" + std::to_string(i), std::to_string(i % 3) + ".0"});
    }
    if (ids.empty()) ids.push_back({"Vendor", "M0", "0.0"});
    identify::Opinion o = identify::Opinion::vacuous(ids);
    const double shape = unit(rng);
    if (shape < 0.1) return o;
    o.uncertainty = shape < 0.2 ? 0.0 : unit(rng);
    std::vector<double> w(o.hypotheses.size()), r(o.hypotheses.size());
    double wsum = 0.0, rsum = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = unit(rng) + 1e-3;
        r[i] = unit(rng) + 1e-3;
        wsum += w[i];
        rsum += r[i];
    }
    for (std::size_t i = 0; i < w.size(); ++i) {
        o.belief[i] = (1.0 - o.uncertainty) * w[i] / wsum;
        o.base_rate[i] = r[i] / rsum;
    }
    return o;
}

std::vector<OracleRow> read_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    auto split = [](const std::string& line) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        return cells;
    };
    std::string line;
    std::getline(in, line);
    const auto header = split(line);
    std::vector<OracleRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = split(line);
        cells.resize(header.size());
        OracleRow row;
        for (std::size_t i = 0; i < header.size(); ++i) row[header[i]] = cells[i];
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

std::string join_years(const std::map<int, int>& counts) {
    std::string out;
    for (const auto& [year, n] : counts) {
        if (!out.empty()) out += ";";
        out += std::to_string(year) + ":" + std::to_string(n);
    }
    return out;
}

std::string format_number(const std::optional<double>& v) {
    if (!v) return "";
    std::ostringstream os;
    os << *v;
    return os.str();
}

}  // namespace

std::vector<std::string> oracle_mismatches(const RiskAssessment& a, const OracleRow& row) {
    std::vector<std::string> out;
    auto expect = [&](const std::string& field, const std::string& actual) {
        if (row.at(field) != actual) out.push_back(field + ": expected '" + row.at(field) + "', got '" + actual + "'");
    };
    std::string cves;
    for (const auto& v : a.cve_table) cves += (cves.empty() ? "" : ";") + v.cve_id;

    expect("identity", a.identity.to_string());
    expect("version_assumed", a.version_assumed ? "true" : "false");
    expect("current_risk", std::string(to_string(a.current_risk)));
    expect("current_risk_basis", format_number(a.current_risk_basis));
    expect("vuln_trend", std::string(to_string(a.vuln_trend)));
    expect("patch_trend", std::string(to_string(a.patch_trend)));
    expect("patch_trend_mean_days", format_number(a.patch_trend_mean_days));
    expect("future_risk", std::string(to_string(a.future_risk)));
    expect("cve_table", cves);
    expect("exceptional_risks", std::to_string(a.exceptional_risks.size()));
    expect("affected_firmware_versions", std::to_string(a.affected_firmware_versions));
    expect("patches_per_year", join_years(a.patches_per_year));
    expect("vulns_per_year", join_years(a.vulns_per_year));
    return out;
}

ServerHarness::ServerHarness(service::DeviceRiskService& svc) {
    service::install_routes(server_, svc);
    port_ = server_.bind_to_any_port("127.0.0.1");
    if (port_ <= 0) throw std::runtime_error("could not bind a test port");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
}

ServerHarness::~ServerHarness() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
}

httplib::Client ServerHarness::client() const {
    httplib::Client c("127.0.0.1", port_);
    c.set_connection_timeout(5);
    c.set_read_timeout(30);
    return c;
}

}  // namespace devrisk::testing
