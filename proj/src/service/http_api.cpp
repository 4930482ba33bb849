#include "devrisk/service/http_api.hpp"

#include <iostream>

#include <httplib.h>

#include "devrisk/core/io.hpp"

namespace devrisk::service {

namespace {

constexpr const char* kJson = "application/json";

void reply(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), kJson);
}

json parse_body(const httplib::Request& req) {
    try {
        return json::parse(req.body);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::MalformedInput, std::string("request body is not valid JSON: ") + e.what());
    }
}

std::optional<Date> as_of_param(const httplib::Request& req) {
    if (!req.has_param("as_of")) return std::nullopt;
    return Date::parse(req.get_param_value("as_of"));
}

std::optional<std::string> param(const httplib::Request& req, const char* name) {
    if (!req.has_param(name)) return std::nullopt;
    return req.get_param_value(name);
}

/// Wraps a handler so module errors become JSON error responses.
template <typename F>
httplib::Server::Handler guarded(F f) {
    return [f](const httplib::Request& req, httplib::Response& res) {
        try {
            f(req, res);
        } catch (const Error& e) {
            reply(res, http_status(e.kind()), error_body(e.kind(), e.what()));
        } catch (const json::exception& e) {
            reply(res, 400, error_body(ErrorKind::MalformedInput, e.what()));
        } catch (const std::exception& e) {
            reply(res, 500, error_body(ErrorKind::Io, e.what()));
        }
    };
}

}  // namespace

int http_status(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Validation:
        case ErrorKind::OutOfRange:
        case ErrorKind::EmptyCorpus:
        case ErrorKind::InsufficientSamples:
        case ErrorKind::DegenerateTrace:
        case ErrorKind::DomainMismatch:
        case ErrorKind::MalformedFeed:
        case ErrorKind::MalformedManifest:
        case ErrorKind::MalformedInput: return 400;
        case ErrorKind::UnknownDevice:
        case ErrorKind::NoAssessment:
        case ErrorKind::UnknownCategory:
        case ErrorKind::UnknownTarget: return 404;
        case ErrorKind::IdentificationFailed: return 422;
        case ErrorKind::Io: return 500;
    }
    return 500;
}

json error_body(ErrorKind kind, const std::string& message) {
    return json{{"error", {{"kind", to_string(kind)}, {"message", message}}}};
}

void install_routes(httplib::Server& server, DeviceRiskService& service) {
    server.Get("/healthz", guarded([&](const auto&, auto& res) { reply(res, 200, service.health()); }));

    server.Post("/devices", guarded([&](const httplib::Request& req, httplib::Response& res) {
        auto record = io::convert<DeviceRecord>(parse_body(req), "device", ErrorKind::Validation);
        auto [id, created] = service.register_device(record);
        reply(res, created ? 201 : 200,
              json{{"device_id", id}, {"created", created}, {"device", service.get_device(id).device}});
    }));

    server.Get("/devices", guarded([&](const httplib::Request& req, httplib::Response& res) {
        std::optional<DeviceCategory> category;
        if (auto c = param(req, "category")) {
            try {
                category = parse_device_category(*c);
            } catch (const Error& e) {
                throw Error(ErrorKind::Validation, e.what());
            }
        }
        reply(res, 200, json{{"devices", service.list_devices(param(req, "owner"), category)}});
    }));

    server.Get(R"(/devices/([^/]+))", guarded([&](const httplib::Request& req, httplib::Response& res) {
        reply(res, 200, service.get_device(req.matches[1]));
    }));

    server.Post(R"(/devices/([^/]+)/assess)", guarded([&](const httplib::Request& req, httplib::Response& res) {
        reply(res, 200, service.run_assessment(req.matches[1], as_of_param(req)));
    }));

    server.Get(R"(/devices/([^/]+)/view)", guarded([&](const httplib::Request& req, httplib::Response& res) {
        auto version = parse_view_version(param(req, "version").value_or("guided"));
        reply(res, 200, service.get_view(req.matches[1], version));
    }));

    server.Get(R"(/categories/([^/]+)/compare)", guarded([&](const httplib::Request& req, httplib::Response& res) {
        reply(res, 200, service.compare_category(req.matches[1], as_of_param(req)));
    }));

    server.Post("/subscriptions", guarded([&](const httplib::Request& req, httplib::Response& res) {
        json body = parse_body(req);
        Subscription s;
        if (auto it = body.find("device_id"); it != body.end() && !it->is_null()) s.device_id = it->get<std::string>();
        if (auto it = body.find("model"); it != body.end() && !it->is_null()) s.model = it->get<ModelKey>();
        s.sink = body.value("sink", std::string{});
        if (s.device_id.has_value() == s.model.has_value()) {
            throw Error(ErrorKind::Validation, "subscription needs exactly one of device_id or model");
        }
        reply(res, 201, service.subscribe(std::move(s)));
    }));

    server.Delete(R"(/subscriptions/([^/]+))", guarded([&](const httplib::Request& req, httplib::Response& res) {
        const std::string id = req.matches[1];
        service.unsubscribe(id);
        reply(res, 200, json{{"deleted", id}});
    }));

    server.Post(R"(/admin/ingest/(feed|manifests|signatures|profiles))",
                guarded([&](const httplib::Request& req, httplib::Response& res) {
                    const std::string kind = req.matches[1];
                    json body = parse_body(req);
                    auto& kb = service.knowledge();
                    IngestReport report;
                    if (kind == "feed") {
                        report = kb.ingest_feed(body);
                    } else if (kind == "manifests") {
                        report = kb.ingest_manifests(body);
                    } else if (kind == "signatures") {
                        report = kb.ingest_signatures(body);
                    } else {
                        report = kb.ingest_profiles(body);
                    }
                    reply(res, 200, report);
                }));

    // Unrouted paths and methods still answer with a JSON error body.
    server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
        if (!res.body.empty()) return;
        const std::string kind = res.status == 404 ? "not_found" : "http_error";
        res.set_content(json{{"error", {{"kind", kind}, {"message", req.method + " " + req.path}}}}.dump(), kJson);
    });
}

void serve(DeviceRiskService& service, const std::string& host, int port) {
    httplib::Server server;
    install_routes(server, service);
    std::cerr << "listening on " << host << ":" << port << "\n";
    if (!server.listen(host, port)) {
        throw Error(ErrorKind::Io, "cannot listen on " + host + ":" + std::to_string(port));
    }
}

}  // namespace devrisk::service
