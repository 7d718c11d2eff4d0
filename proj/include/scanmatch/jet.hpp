// Copyright 2026 The Scanmatch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SCANMATCH_JET_HPP_
#define SCANMATCH_JET_HPP_

#include <cmath>
#include <ostream>
#include <stdexcept>

#include <Eigen/Core>

namespace scanmatch {

// Forward-mode autodiff scalar with a fixed 3-slot derivative vector, one
// slot per pose parameter (x, y, theta). Arithmetic and the math functions
// below propagate derivatives by the usual chain/product/quotient rules.
//
// Comparison operators look at the value part only, so branches such as
// min/max/clamp select the subderivative of the active branch. Outside the
// explicit domain errors (division by a zero-valued jet, log/sqrt/atan2
// domain violations) operations follow IEEE semantics and let NaN/inf
// propagate; solvers detect bad probes through cost validity checks.
struct Jet3 {
  double a = 0.0;
  Eigen::Vector3d v = Eigen::Vector3d::Zero();

  Jet3() = default;
  Jet3(double value) : a(value), v(Eigen::Vector3d::Zero()) {}  // NOLINT(runtime/explicit)
  Jet3(double value, const Eigen::Vector3d& derivatives) : a(value), v(derivatives) {}

  static Jet3 Constant(double value) { return Jet3(value); }

  // Seeds parameter slot k with a unit derivative.
  static Jet3 Variable(double value, int k) {
    if (k < 0 || k > 2) {
      throw std::invalid_argument("Jet3::Variable: derivative index must be in 0..2");
    }
    Jet3 jet(value);
    jet.v[k] = 1.0;
    return jet;
  }
};

inline Jet3 operator+(const Jet3& x) { return x; }
inline Jet3 operator-(const Jet3& x) { return Jet3(-x.a, -x.v); }

inline Jet3 operator+(const Jet3& x, const Jet3& y) { return Jet3(x.a + y.a, x.v + y.v); }
inline Jet3 operator+(const Jet3& x, double s) { return Jet3(x.a + s, x.v); }
inline Jet3 operator+(double s, const Jet3& y) { return Jet3(s + y.a, y.v); }

inline Jet3 operator-(const Jet3& x, const Jet3& y) { return Jet3(x.a - y.a, x.v - y.v); }
inline Jet3 operator-(const Jet3& x, double s) { return Jet3(x.a - s, x.v); }
inline Jet3 operator-(double s, const Jet3& y) { return Jet3(s - y.a, -y.v); }

inline Jet3 operator*(const Jet3& x, const Jet3& y) {
  return Jet3(x.a * y.a, x.v * y.a + x.a * y.v);
}
inline Jet3 operator*(const Jet3& x, double s) { return Jet3(x.a * s, x.v * s); }
inline Jet3 operator*(double s, const Jet3& y) { return Jet3(s * y.a, s * y.v); }

inline Jet3 operator/(const Jet3& x, const Jet3& y) {
  if (y.a == 0.0) {
    throw std::domain_error("Jet3: division by zero-valued jet");
  }
  // True division keeps x/x exactly 1.
  const double value = x.a / y.a;
  return Jet3(value, (x.v - value * y.v) / y.a);
}
inline Jet3 operator/(const Jet3& x, double s) {
  if (s == 0.0) {
    throw std::domain_error("Jet3: division by zero scalar");
  }
  return Jet3(x.a / s, x.v / s);
}
inline Jet3 operator/(double s, const Jet3& y) { return Jet3(s) / y; }

inline Jet3& operator+=(Jet3& x, const Jet3& y) { x = x + y; return x; }
inline Jet3& operator-=(Jet3& x, const Jet3& y) { x = x - y; return x; }
inline Jet3& operator*=(Jet3& x, const Jet3& y) { x = x * y; return x; }
inline Jet3& operator/=(Jet3& x, const Jet3& y) { x = x / y; return x; }

// Value-only comparisons.
inline bool operator<(const Jet3& x, const Jet3& y) { return x.a < y.a; }
inline bool operator>(const Jet3& x, const Jet3& y) { return x.a > y.a; }
inline bool operator<=(const Jet3& x, const Jet3& y) { return x.a <= y.a; }
inline bool operator>=(const Jet3& x, const Jet3& y) { return x.a >= y.a; }
inline bool operator==(const Jet3& x, const Jet3& y) { return x.a == y.a; }
inline bool operator!=(const Jet3& x, const Jet3& y) { return x.a != y.a; }
inline bool operator<(const Jet3& x, double s) { return x.a < s; }
inline bool operator>(const Jet3& x, double s) { return x.a > s; }
inline bool operator<(double s, const Jet3& y) { return s < y.a; }
inline bool operator>(double s, const Jet3& y) { return s > y.a; }

inline Jet3 sin(const Jet3& x) { return Jet3(std::sin(x.a), std::cos(x.a) * x.v); }
inline Jet3 cos(const Jet3& x) { return Jet3(std::cos(x.a), -std::sin(x.a) * x.v); }

inline Jet3 exp(const Jet3& x) {
  const double e = std::exp(x.a);
  return Jet3(e, e * x.v);
}

inline Jet3 log(const Jet3& x) {
  if (!(x.a > 0.0) && !std::isnan(x.a)) {
    throw std::domain_error("Jet3: log of non-positive jet");
  }
  return Jet3(std::log(x.a), x.v / x.a);
}

inline Jet3 sqrt(const Jet3& x) {
  if (x.a < 0.0) {
    throw std::domain_error("Jet3: sqrt of negative jet");
  }
  const double root = std::sqrt(x.a);
  return Jet3(root, x.v / (2.0 * root));
}

inline Jet3 atan2(const Jet3& y, const Jet3& x) {
  if (x.a == 0.0 && y.a == 0.0) {
    throw std::domain_error("Jet3: atan2(0, 0)");
  }
  const double inv_norm2 = 1.0 / (x.a * x.a + y.a * y.a);
  return Jet3(std::atan2(y.a, x.a), (x.a * y.v - y.a * x.v) * inv_norm2);
}

inline bool IsFinite(const Jet3& x) { return std::isfinite(x.a) && x.v.allFinite(); }

// The scalar part of a value; lets templated geometry code branch on the
// numeric value regardless of whether it runs on double or Jet3.
inline double ScalarValue(double x) { return x; }
inline double ScalarValue(const Jet3& x) { return x.a; }

inline std::ostream& operator<<(std::ostream& os, const Jet3& jet) {
  return os << jet.a << " [" << jet.v[0] << ", " << jet.v[1] << ", " << jet.v[2] << "]";
}

}  // namespace scanmatch

#endif  // SCANMATCH_JET_HPP_
