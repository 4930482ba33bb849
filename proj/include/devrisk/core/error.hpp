#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace devrisk {

enum class ErrorKind {
    Validation,
    OutOfRange,
    EmptyCorpus,
    InsufficientSamples,
    DegenerateTrace,
    DomainMismatch,
    MalformedFeed,
    MalformedManifest,
    MalformedInput,
    UnknownDevice,
    IdentificationFailed,
    NoAssessment,
    UnknownCategory,
    UnknownTarget,
    Io,
};

std::string_view to_string(ErrorKind kind);

/// Every module reports failures through this type; `kind` drives CLI exit
/// codes and HTTP status mapping.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace devrisk
