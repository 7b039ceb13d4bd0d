#pragma once

#include <stdexcept>
#include <string>

namespace qbcast {

/// Failure with a stable machine-readable code ("not-psd", "bad-partition", ...)
/// plus an optional human-readable detail.
class Error : public std::runtime_error {
public:
    explicit Error(std::string code, const std::string& detail = {})
        : std::runtime_error(detail.empty() ? code : code + ": " + detail),
          code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

}  // namespace qbcast
