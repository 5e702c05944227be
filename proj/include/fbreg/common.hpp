#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fbreg {

// Small vector in R^m for per-point API values. Fields themselves are stored
// as flat arrays; this type only appears at call boundaries.
inline constexpr int kMaxCodim = 8;

struct VecM {
  std::array<double, kMaxCodim> v{};
  int m = 0;

  VecM() = default;
  explicit VecM(int m_) : m(m_) {}
  VecM(std::initializer_list<double> init) : m(static_cast<int>(init.size())) {
    int i = 0;
    for (double x : init) v[static_cast<size_t>(i++)] = x;
  }

  double& operator[](int i) { return v[static_cast<size_t>(i)]; }
  double operator[](int i) const { return v[static_cast<size_t>(i)]; }

  double norm2() const {
    double s = 0;
    for (int i = 0; i < m; ++i) s += v[static_cast<size_t>(i)] * v[static_cast<size_t>(i)];
    return s;
  }
  double norm() const { return std::sqrt(norm2()); }
};

inline VecM operator*(double a, const VecM& x) {
  VecM y(x.m);
  for (int i = 0; i < x.m; ++i) y[i] = a * x[i];
  return y;
}
inline VecM operator-(const VecM& a, const VecM& b) {
  VecM y(a.m);
  for (int i = 0; i < a.m; ++i) y[i] = a[i] - b[i];
  return y;
}
inline VecM operator+(const VecM& a, const VecM& b) {
  VecM y(a.m);
  for (int i = 0; i < a.m; ++i) y[i] = a[i] + b[i];
  return y;
}
inline double dot(const VecM& a, const VecM& b) {
  double s = 0;
  for (int i = 0; i < a.m; ++i) s += a[i] * b[i];
  return s;
}

// Point in R^n, n <= 3.
using Point = std::array<double, 3>;

inline double dotn(const Point& a, const Point& b, int n) {
  double s = 0;
  for (int i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}
inline double norm_n(const Point& a, int n) { return std::sqrt(dotn(a, a, n)); }

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Volume of the unit ball and area of the unit sphere in R^n.
inline double unit_ball_volume(int n) {
  switch (n) {
    case 1: return 2.0;
    case 2: return M_PI;
    case 3: return 4.0 * M_PI / 3.0;
    default: throw InputError("unit_ball_volume: n must be 1, 2 or 3");
  }
}
inline double unit_sphere_area(int n) {
  switch (n) {
    case 1: return 2.0;  // counting measure of {-1,+1}
    case 2: return 2.0 * M_PI;
    case 3: return 4.0 * M_PI;
    default: throw InputError("unit_sphere_area: n must be 1, 2 or 3");
  }
}

}  // namespace fbreg
