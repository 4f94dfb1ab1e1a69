#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ssqa {

/// Base class of every error raised by the analyzer library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class AddressError : public Error {
public:
    using Error::Error;
};

class LookupError : public Error {
public:
    using Error::Error;
};

class WorkbookError : public Error {
public:
    using Error::Error;
};

/// Raised by the `.xlsx` and fixture loaders. `part()` names the archive part
/// or fixture file that failed; `line()` is 0 when not applicable.
class IngestError : public Error {
public:
    IngestError(std::string part, std::size_t line, const std::string& message)
        : Error(format(part, line, message)), part_(std::move(part)), line_(line) {}

    const std::string& part() const noexcept { return part_; }
    std::size_t line() const noexcept { return line_; }

private:
    static std::string format(const std::string& part, std::size_t line, const std::string& message) {
        std::string out = part;
        if (line != 0) out += ":" + std::to_string(line);
        if (!out.empty()) out += ": ";
        return out + message;
    }

    std::string part_;
    std::size_t line_;
};

/// Formula syntax error. `offset()` is the 0-based character offset into the
/// formula body (the text after the leading '=').
class FormulaError : public Error {
public:
    FormulaError(std::size_t offset, const std::string& message)
        : Error("at offset " + std::to_string(offset) + ": " + message), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// `line()` is 1-based, 0 when the error is not tied to a line.
class ManifestError : public Error {
public:
    ManifestError(std::size_t line, const std::string& message) : ManifestError(std::string(), line, message) {}
    ManifestError(const std::string& source, std::size_t line, const std::string& message)
        : Error(format(source, line, message)), line_(line), detail_(message) {}

    std::size_t line() const noexcept { return line_; }
    /// The message without the source and line prefix.
    const std::string& detail() const noexcept { return detail_; }

private:
    static std::string format(const std::string& source, std::size_t line, const std::string& message) {
        std::string out = source.empty() ? "" : source + ": ";
        if (line != 0) out += "line " + std::to_string(line) + ": ";
        return out + message;
    }

    std::size_t line_;
    std::string detail_;
};

/// `line()` is 1-based, 0 when the error is not tied to a line.
class ConfigError : public Error {
public:
    ConfigError(std::size_t line, const std::string& message) : ConfigError(std::string(), line, message) {}
    ConfigError(const std::string& source, std::size_t line, const std::string& message)
        : Error(format(source, line, message)), line_(line), detail_(message) {}

    std::size_t line() const noexcept { return line_; }
    /// The message without the source and line prefix.
    const std::string& detail() const noexcept { return detail_; }

private:
    static std::string format(const std::string& source, std::size_t line, const std::string& message) {
        std::string out = source.empty() ? "" : source + ": ";
        if (line != 0) out += "line " + std::to_string(line) + ": ";
        return out + message;
    }

    std::size_t line_;
    std::string detail_;
};

}  // namespace ssqa
