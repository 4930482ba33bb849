#pragma once

#include <string>

#include "devrisk/core/error.hpp"
#include "devrisk/service/service.hpp"

namespace httplib {
class Server;
}

namespace devrisk::service {

/// HTTP status for an error kind: 400 bad input, 404 unknown resource,
/// 422 identification failure, 500 otherwise.
int http_status(ErrorKind kind);

json error_body(ErrorKind kind, const std::string& message);

/// Registers every API route on `server`.
///
///   POST /devices, GET /devices, GET /devices/{id}
///   POST /devices/{id}/assess?as_of=DATE
///   GET  /devices/{id}/view?version=guided|rich
///   GET  /categories/{label}/compare?as_of=DATE
///   POST /subscriptions, DELETE /subscriptions/{id}
///   POST /admin/ingest/{feed|manifests|signatures|profiles}
///   GET  /healthz
void install_routes(httplib::Server& server, DeviceRiskService& service);

/// Blocks serving on host:port until the server is stopped.
void serve(DeviceRiskService& service, const std::string& host, int port);

}  // namespace devrisk::service
