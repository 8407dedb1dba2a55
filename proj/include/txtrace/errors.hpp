#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace txtrace {

// Base for all data-level errors; the CLI maps these to exit code 2.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct MalformedLine : Error {
    std::size_t line_no;
    MalformedLine(std::size_t line, const std::string& reason)
        : Error("line " + std::to_string(line) + ": " + reason), line_no(line) {}
};

struct DuplicateTxid : Error {
    std::string txid;
    explicit DuplicateTxid(const std::string& id)
        : Error("duplicate txid " + id), txid(id) {}
};

struct NonMonotonicTimestamp : Error {
    std::string txid;
    explicit NonMonotonicTimestamp(const std::string& id)
        : Error("non-monotonic timestamp at tx " + id), txid(id) {}
};

struct NegativeFee : Error {
    std::string txid;
    explicit NegativeFee(const std::string& id)
        : Error("outputs exceed inputs in tx " + id), txid(id) {}
};

struct MalformedRow : Error {
    std::size_t line_no;
    MalformedRow(std::size_t line, const std::string& reason)
        : Error("row " + std::to_string(line) + ": " + reason), line_no(line) {}
};

struct UnknownCategory : Error {
    std::string category;
    explicit UnknownCategory(const std::string& cat)
        : Error("unknown tag category '" + cat + "'"), category(cat) {}
};

struct InsufficientData : Error {
    explicit InsufficientData(const std::string& msg) : Error(msg) {}
};

struct ModelUntrained : Error {
    ModelUntrained() : Error("model has no trained trees") {}
};

struct MalformedHex : Error {
    explicit MalformedHex(const std::string& msg) : Error(msg) {}
};

struct SeedMismatch : Error {
    explicit SeedMismatch(const std::string& msg) : Error(msg) {}
};

struct IoError : Error {
    explicit IoError(const std::string& msg) : Error(msg) {}
};

}  // namespace txtrace
