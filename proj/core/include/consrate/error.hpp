#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace consrate {

/// Precondition or argument failure (bad probabilities, malformed file, ...).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An enumeration or state space would exceed its configured cap.
class CapacityError : public std::runtime_error {
public:
    CapacityError(const std::string& what, std::size_t cap)
        : std::runtime_error(what + " (cap " + std::to_string(cap) + ")"), cap_(cap) {}

    std::size_t cap() const noexcept { return cap_; }

private:
    std::size_t cap_;
};

/// Too few usable data points for a fit; carries the points that were usable.
class InsufficientData : public std::runtime_error {
public:
    InsufficientData(const std::string& what, std::vector<std::size_t> usable)
        : std::runtime_error(what), usable_(std::move(usable)) {}

    const std::vector<std::size_t>& usable() const noexcept { return usable_; }

private:
    std::vector<std::size_t> usable_;
};

}  // namespace consrate
