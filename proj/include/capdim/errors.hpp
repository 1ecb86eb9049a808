#pragma once

#include <stdexcept>
#include <string>

namespace capdim {

/// A named precondition of an operation does not hold.
class PreconditionError : public std::invalid_argument {
public:
    PreconditionError(std::string name, const std::string& detail)
        : std::invalid_argument(name + ": " + detail), name_(std::move(name)) {}

    [[nodiscard]] const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

/// An exact search refused an instance larger than its configured cap.
class CapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool condition, const char* name, const std::string& detail) {
    if (!condition) throw PreconditionError(name, detail);
}

}  // namespace capdim
