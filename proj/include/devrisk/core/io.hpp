#pragma once

#include <filesystem>
#include <string>

#include "devrisk/core/error.hpp"
#include "devrisk/core/model.hpp"

namespace devrisk::io {

std::string read_text(const std::filesystem::path& path);

/// Parses a JSON file; I/O failures raise Error{Io}, syntax errors Error{kind}.
json read_json(const std::filesystem::path& path, ErrorKind kind = ErrorKind::MalformedInput);

/// Writes via a sibling temporary file and rename, so readers never observe
/// a partially written file.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// json -> T, rethrowing library errors as Error{kind} prefixed with `context`.
template <typename T>
T convert(const json& j, const std::string& context, ErrorKind kind = ErrorKind::MalformedInput) {
    try {
        return j.get<T>();
    } catch (const Error& e) {
        throw Error(kind, context + ": " + e.what());
    } catch (const json::exception& e) {
        throw Error(kind, context + ": " + e.what());
    }
}

}  // namespace devrisk::io
