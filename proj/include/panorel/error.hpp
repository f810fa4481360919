#pragma once

#include <stdexcept>
#include <string>

namespace panorel {

/// Library-wide exception. `code()` is a short machine-readable tag
/// (e.g. "out_of_range", "io", "insufficient_normals") surfaced by the CLI.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code))
    {
    }

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

} // namespace panorel
