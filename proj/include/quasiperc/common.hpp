#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace quasiperc {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator-() const { return {-x, -y}; }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
// Rotation by +90 degrees; the positive-orientation normal used everywhere.
inline Vec2 perp(Vec2 a) { return {-a.y, a.x}; }

enum class errc {
    invalid_basis,
    degenerate_basis,
    singular_grid,
    degenerate_band,
    invalid_patch,
    wrong_family,
    unsupported_rule,
    invalid_input,
    margin_error,
    not_interior,
    bad_file,
};

class error : public std::runtime_error {
  public:
    error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    errc code() const { return code_; }

  private:
    errc code_;
};

} // namespace quasiperc
