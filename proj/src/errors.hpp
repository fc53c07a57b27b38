#pragma once
#include <stdexcept>
#include <string>

namespace sic {

// Precondition / input violations (bad rates, mismatched boxes, empty brackets...).
// The C API maps these to SIC_ERR_DOMAIN, the CLI to exit code 1.
struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed configs, unknown commands/keys, unreadable files.
// The C API maps these to SIC_ERR_USAGE, the CLI to exit code 2.
struct UsageError : std::runtime_error {
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace sic
