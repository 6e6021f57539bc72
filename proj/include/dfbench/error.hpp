#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dfbench {

// Process exit codes shared by the CLI.
enum class ExitCode : int {
    ok = 0,
    usage = 1,
    data_validation = 2,
    numerical_failure = 3,
};

class Error : public std::runtime_error {
public:
    Error(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ExitCode code() const noexcept { return code_; }

private:
    ExitCode code_;
};

class UsageError : public Error {
public:
    explicit UsageError(const std::string& what) : Error(ExitCode::usage, what) {}
};

class DataError : public Error {
public:
    explicit DataError(const std::string& what) : Error(ExitCode::data_validation, what) {}
};

class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error(ExitCode::numerical_failure, what) {}
};

// Raised by the feature-file loaders. Row and column are 1-based positions in
// the data block (0 when not applicable).
class LoadError : public DataError {
public:
    LoadError(const std::string& what, std::size_t row = 0, std::size_t column = 0)
        : DataError(what), row_(row), column_(column) {}
    std::size_t row() const noexcept { return row_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

}  // namespace dfbench
