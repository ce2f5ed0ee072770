#pragma once

#include <array>
#include <string_view>

namespace taskload {

// Spatial units are fixed per axis: NM lateral/longitudinal, ft vertical.
// Time is always minutes; intensities are per hour at interfaces only.
enum class Axis { lateral = 0, vertical = 1, longitudinal = 2 };

inline constexpr std::array<Axis, 3> kAllAxes{Axis::lateral, Axis::vertical, Axis::longitudinal};

constexpr std::size_t index(Axis a) { return static_cast<std::size_t>(a); }

constexpr std::string_view axis_name(Axis a) {
    switch (a) {
        case Axis::lateral: return "lateral";
        case Axis::vertical: return "vertical";
        case Axis::longitudinal: return "longitudinal";
    }
    return "?";
}

// CSV column header for an axis, unit-suffixed.
constexpr std::string_view axis_column(Axis a) {
    switch (a) {
        case Axis::lateral: return "lat_nm";
        case Axis::vertical: return "vert_ft";
        case Axis::longitudinal: return "long_nm";
    }
    return "?";
}

template <typename T>
using PerAxis = std::array<T, 3>;

constexpr double kMinutesPerHour = 60.0;

constexpr double per_hour_to_per_minute(double rate_per_hour) { return rate_per_hour / kMinutesPerHour; }

// knots -> NM per minute
constexpr double knots_to_nm_per_minute(double kt) { return kt / kMinutesPerHour; }

}  // namespace taskload
