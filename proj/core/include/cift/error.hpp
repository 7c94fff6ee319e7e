#pragma once

#include <cstdlib>
#include <string>
#include <utility>
#include <variant>

namespace cift {

enum class ErrorKind {
    Configuration,       // unusable case directory, bad flags
    SchemaVersion,       // case.db created by an unknown schema version
    Io,                  // filesystem read/write failure
    Integrity,           // digest mismatch on read-back
    UnrecognizedFormat,  // magic bytes do not match any known profile
    UnsupportedVersion,  // known magic, version outside the supported set
    Truncated,           // declared lengths exceed the available bytes
    Parameter,           // missing or malformed caller-supplied value
    Parse,               // payload is not valid JSON / not decodable
    Range,               // timestamp outside the representable range
    Transport,           // connection or TLS failure
    AuthFailed,          // credentials rejected or session expired
};

const char* to_string(ErrorKind kind);

struct Error {
    ErrorKind kind;
    std::string message;
};

// Minimal expected-style carrier for parser and acquirer results. Fatal
// conditions (unwritable case directory, schema mismatch) throw CaseError
// instead; this type is for per-item failures the caller is expected to
// inspect and route.
template <typename T>
class Result {
public:
    Result(T value) : state_(std::move(value)) {}
    Result(Error error) : state_(std::move(error)) {}

    static Result failure(ErrorKind kind, std::string message) {
        return Result(Error{kind, std::move(message)});
    }

    bool ok() const { return std::holds_alternative<T>(state_); }
    explicit operator bool() const { return ok(); }

    T& value() {
        if (!ok()) abort_on_bad_access();
        return std::get<T>(state_);
    }
    const T& value() const {
        if (!ok()) abort_on_bad_access();
        return std::get<T>(state_);
    }

    const Error& error() const {
        if (ok()) abort_on_bad_access();
        return std::get<Error>(state_);
    }

private:
    [[noreturn]] static void abort_on_bad_access() { std::abort(); }

    std::variant<T, Error> state_;
};

// Thrown for conditions that make the whole case unusable.
class CaseError : public std::exception {
public:
    CaseError(ErrorKind kind, std::string message)
        : kind_(kind), message_(std::move(message)) {}

    ErrorKind kind() const { return kind_; }
    const char* what() const noexcept override { return message_.c_str(); }

private:
    ErrorKind kind_;
    std::string message_;
};

}  // namespace cift
