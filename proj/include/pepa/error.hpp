#pragma once

#include <stdexcept>
#include <string>

namespace pepa {

// Failure classes. The CLI maps each one to a distinct exit code.
enum class ErrorKind {
    usage,
    parse,
    model,
    condition,
    state_cap,
    solver,
    verification,
    tolerance,
    io,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class ParseError : public Error {
public:
    ParseError(int line, int column, const std::string& message)
        : Error(ErrorKind::parse,
                std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

inline Error model_error(const std::string& message) {
    return Error(ErrorKind::model, message);
}

int exit_code(ErrorKind kind);

} // namespace pepa
