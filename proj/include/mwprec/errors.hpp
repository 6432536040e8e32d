#pragma once

#include <stdexcept>
#include <string>

namespace mwprec {

// All library errors carry a short category token so the CLI can emit
// "error: <category>: <detail>" on one line.
class Error : public std::runtime_error {
public:
    Error(std::string category, const std::string& detail)
        : std::runtime_error(detail), category_(std::move(category)) {}
    const std::string& category() const { return category_; }

private:
    std::string category_;
};

struct PreconditionError : Error {
    explicit PreconditionError(const std::string& d) : Error("precondition", d) {}
};
struct FormatError : Error {
    explicit FormatError(const std::string& d) : Error("format", d) {}
};
struct IoError : Error {
    explicit IoError(const std::string& d) : Error("io", d) {}
};
struct ConfigError : Error {
    explicit ConfigError(const std::string& d) : Error("config", d) {}
};
struct NumericError : Error {
    explicit NumericError(const std::string& d) : Error("numeric", d) {}
};

} // namespace mwprec
