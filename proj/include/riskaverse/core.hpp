#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace riskaverse {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Raised when a numerical procedure cannot deliver its contract
/// (non-finite values, exhausted subdivision budget, singular matrices).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Axis-aligned box with nonempty interior. Used both as the parameter
/// space and as the effective integration region of continuous observations.
class Box {
 public:
  Box() = default;
  Box(Vector lower, Vector upper);

  /// One-dimensional interval [lo, hi].
  static Box interval(double lo, double hi);
  /// The cube [lo, hi]^dim.
  static Box cube(int dim, double lo, double hi);

  int dim() const { return static_cast<int>(lower_.size()); }
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }
  Vector width() const { return upper_ - lower_; }
  Vector center() const { return 0.5 * (lower_ + upper_); }
  double diameter() const { return width().norm(); }
  double volume() const { return width().prod(); }

  bool contains(const Vector& v, double slack = 0.0) const;
  /// Componentwise clamp into the box.
  Vector clamp(const Vector& v) const;
  /// Intersection with another box of equal dimension; throws if empty.
  Box intersect(const Box& other) const;

 private:
  Vector lower_;
  Vector upper_;
};

using ParameterSpace = Box;

/// Builds a Vector from an initializer list, e.g. vec({0.2, 0.4}).
Vector vec(std::initializer_list<double> values);
/// One-element vector.
Vector scalar(double v);

/// Short human-readable rendering of a point, e.g. "(0.3, 0.1)".
std::string format_point(const Vector& v, int precision = 6);

}  // namespace riskaverse
