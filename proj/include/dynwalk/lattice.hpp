// Copyright (c) 2026 dynwalk contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>

namespace dynwalk {

/// Axis-aligned unit step on Z^2.
struct Direction {
    int dx = 1;
    int dy = 0;

    friend constexpr bool operator==(Direction, Direction) = default;
};

/// The four unit steps, in canonical draw order.
inline constexpr std::array<Direction, 4> kDirections{
    Direction{1, 0}, Direction{-1, 0}, Direction{0, 1}, Direction{0, -1}};

struct Point {
    std::int64_t x = 0;
    std::int64_t y = 0;

    friend constexpr bool operator==(Point, Point) = default;

    constexpr Point& operator+=(Direction d) {
        x += d.dx;
        y += d.dy;
        return *this;
    }
    friend constexpr Point operator+(Point p, Direction d) { return p += d; }

    constexpr std::int64_t norm2() const { return x * x + y * y; }
};

inline constexpr Point kOrigin{0, 0};

/// The discrete circle of radius 1: the four lattice neighbours of the origin.
constexpr bool on_unit_circle(Point p) { return p.norm2() == 1; }

}  // namespace dynwalk
