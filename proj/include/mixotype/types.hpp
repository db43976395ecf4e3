#pragma once

#include <cmath>
#include <complex>

namespace mixotype {

/// A point of the hodograph plane.
struct Point {
    double u = 0.0;
    double v = 0.0;

    friend Point operator+(Point a, Point b) { return {a.u + b.u, a.v + b.v}; }
    friend Point operator-(Point a, Point b) { return {a.u - b.u, a.v - b.v}; }
    friend Point operator*(double s, Point a) { return {s * a.u, s * a.v}; }
    friend bool operator==(const Point&, const Point&) = default;
};

inline double dot(Point a, Point b) { return a.u * b.u + a.v * b.v; }
inline double norm(Point a) { return std::hypot(a.u, a.v); }
inline Point perp(Point a) { return {-a.v, a.u}; }

/// Axis-aligned rectangle in the (u, v) plane.
struct Rect {
    double u_min = -1.0;
    double u_max = 1.0;
    double v_min = -1.0;
    double v_max = 1.0;

    bool contains(Point p) const {
        return p.u >= u_min && p.u <= u_max && p.v >= v_min && p.v <= v_max;
    }

    static Rect around(Point c, double half_width) {
        return {c.u - half_width, c.u + half_width, c.v - half_width, c.v + half_width};
    }
};

using Complex = std::complex<double>;

}  // namespace mixotype
