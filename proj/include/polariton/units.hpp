#pragma once

#include <numbers>

namespace polariton {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Internally every frequency is angular (rad/s). Human-facing values are
// ordinary frequencies (Hz), i.e. "2π × 8 GHz" is written 8e9.
constexpr double angular_from_hz(double hz) { return kTwoPi * hz; }
constexpr double hz_from_angular(double omega) { return omega / kTwoPi; }

}  // namespace polariton
