#pragma once

#include <numbers>

namespace tapearm {

inline constexpr double kPi = std::numbers::pi;

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

namespace literals {
constexpr double operator""_deg(long double v) { return deg_to_rad(static_cast<double>(v)); }
constexpr double operator""_deg(unsigned long long v) { return deg_to_rad(static_cast<double>(v)); }
constexpr double operator""_cm(long double v) { return static_cast<double>(v) / 100.0; }
constexpr double operator""_cm(unsigned long long v) { return static_cast<double>(v) / 100.0; }
constexpr double operator""_g(long double v) { return static_cast<double>(v) / 1000.0; }
constexpr double operator""_g(unsigned long long v) { return static_cast<double>(v) / 1000.0; }
}  // namespace literals

}  // namespace tapearm
