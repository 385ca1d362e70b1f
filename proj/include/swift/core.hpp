#pragma once

#include <bit>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace swift {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kEulerGamma = std::numbers::egamma;

// Raised when an iterative numerical procedure fails to reach its target.
// Carries the best estimate found so callers can decide whether to use it.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double best_estimate, double achieved)
        : std::runtime_error(what), best_estimate_(best_estimate), achieved_(achieved) {}

    double best_estimate() const noexcept { return best_estimate_; }
    double achieved() const noexcept { return achieved_; }

private:
    double best_estimate_;
    double achieved_;
};

inline bool is_power_of_two(std::size_t n) noexcept { return std::has_single_bit(n); }

inline void require(bool condition, const char* message) {
    if (!condition) throw std::invalid_argument(message);
}

/// Real coefficients indexed by k = k1 .. k1 + size() - 1.
struct CoefficientArray {
    int k1 = 0;
    std::vector<double> values;

    int k2() const noexcept { return k1 + static_cast<int>(values.size()); }
    std::size_t size() const noexcept { return values.size(); }
    bool contains(int k) const noexcept { return k >= k1 && k < k2(); }
    double at(int k) const { return values.at(static_cast<std::size_t>(k - k1)); }
    double& at(int k) { return values.at(static_cast<std::size_t>(k - k1)); }
};

}  // namespace swift
