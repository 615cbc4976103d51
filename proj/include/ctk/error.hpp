#pragma once

#include <stdexcept>
#include <string>

namespace ctk {

// Every error carries a short machine-readable code; the CLI prints it as a
// single-line "error: <code>: <message>" prefix and exits nonzero.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

class ShapeError : public Error {
public:
    explicit ShapeError(const std::string& msg) : Error("E_SHAPE", msg) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error("E_CONFIG", msg) {}
};

class DecodeError : public Error {
public:
    explicit DecodeError(const std::string& msg) : Error("E_DECODE", msg) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error("E_IO", msg) {}
};

// Malformed band blob: bad magic, version, or checksum.
class FormatError : public Error {
public:
    explicit FormatError(const std::string& msg) : Error("E_FORMAT", msg) {}
};

// Inconsistent or incomplete decomposition manifest.
class ManifestError : public Error {
public:
    explicit ManifestError(const std::string& msg) : Error("E_MANIFEST", msg) {}
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error("E_DOMAIN", msg) {}
};

class UsageError : public Error {
public:
    explicit UsageError(const std::string& msg) : Error("E_USAGE", msg) {}
};

} // namespace ctk
