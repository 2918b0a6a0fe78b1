#pragma once

// Shared error types and small value helpers used across the library.

#include <cstdint>
#include <stdexcept>
#include <string>

namespace treelike {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Construction or search ran past its element/state budget. The partial
// count reached is carried so callers can report how far they got.
class BudgetExceededError : public Error {
public:
    BudgetExceededError(const std::string& what, std::size_t reached)
        : Error(what + ": exceeded at " + std::to_string(reached)), reached_(reached) {}
    std::size_t reached() const { return reached_; }

private:
    std::size_t reached_;
};

// A distance needed exactly could not be certified from the materialized
// ball; the fix is always a larger radius.
class UncertifiedDistanceError : public Error {
public:
    explicit UncertifiedDistanceError(const std::string& what) : Error(what) {}
};

// Exact half-integer, stored doubled. Gromov products and the B5 statistic
// are half-integers; keeping them doubled avoids floating point entirely.
struct HalfInteger {
    int twice = 0;

    static HalfInteger from_twice(int t) { return HalfInteger{t}; }
    double value() const { return twice / 2.0; }
    bool operator==(const HalfInteger&) const = default;
    auto operator<=>(const HalfInteger&) const = default;

    std::string str() const {
        if (twice % 2 == 0) return std::to_string(twice / 2);
        return std::to_string(twice) + "/2";
    }
};

}  // namespace treelike
