#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace flexlex {

/// Broad failure category. The CLI maps these onto exit codes 2, 3 and 4.
enum class ErrorKind { Config, Data, Io };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ErrorKind::Config, what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

class DataError : public Error {
public:
    explicit DataError(const std::string& what) : Error(ErrorKind::Data, what) {}
};

// CoNLL-U line with too few columns.
class MalformedRecordError : public DataError {
public:
    MalformedRecordError(std::size_t line, const std::string& what)
        : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class EncodingError : public DataError {
public:
    EncodingError(std::size_t line, const std::string& what)
        : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Store contents violate the format's invariants (raised before any byte is written).
class FormatError : public DataError {
public:
    explicit FormatError(const std::string& what) : DataError(what) {}
};

class UnrecognizedFormatError : public DataError {
public:
    explicit UnrecognizedFormatError(const std::string& what) : DataError(what) {}
};

class CorruptionError : public DataError {
public:
    CorruptionError(std::uint64_t offset, const std::string& what)
        : DataError("byte offset " + std::to_string(offset) + ": " + what), offset_(offset) {}
    std::uint64_t offset() const noexcept { return offset_; }

private:
    std::uint64_t offset_;
};

class EmptyClassError : public DataError {
public:
    explicit EmptyClassError(const std::string& what) : DataError(what) {}
};

class UndefinedCosineError : public DataError {
public:
    explicit UndefinedCosineError(const std::string& what) : DataError(what) {}
};

class DegenerateInputError : public DataError {
public:
    explicit DegenerateInputError(const std::string& what) : DataError(what) {}
};

class InsufficientDataError : public DataError {
public:
    explicit InsufficientDataError(const std::string& what) : DataError(what) {}
};

}  // namespace flexlex
