#pragma once

#include <stdexcept>
#include <string>

namespace sublev {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class RankDeficientError : public Error {
public:
    using Error::Error;
};

class NotPositiveDefiniteError : public Error {
public:
    using Error::Error;
};

class KTooLargeError : public Error {
public:
    using Error::Error;
};

class InvalidSizeError : public Error {
public:
    using Error::Error;
};

class InvalidParamError : public Error {
public:
    using Error::Error;
};

class DimensionMismatchError : public Error {
public:
    using Error::Error;
};

class EmptyTruthError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, int line, int column)
        : Error(what + " (line " + std::to_string(line) + ", column " +
                std::to_string(column) + ")"),
          line_(line),
          column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

class EmptyFileError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace sublev
