#include "riskaverse/core.hpp"

#include <cmath>
#include <sstream>

namespace riskaverse {

Box::Box(Vector lower, Vector upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() == 0 || lower_.size() != upper_.size()) {
    throw std::invalid_argument("Box: bounds must be nonempty and of equal dimension");
  }
  for (int i = 0; i < lower_.size(); ++i) {
    if (!std::isfinite(lower_[i]) || !std::isfinite(upper_[i]) || !(lower_[i] < upper_[i])) {
      throw std::invalid_argument("Box: need finite lower[i] < upper[i] in every coordinate");
    }
  }
}

Box Box::interval(double lo, double hi) { return Box(scalar(lo), scalar(hi)); }

Box Box::cube(int dim, double lo, double hi) {
  return Box(Vector::Constant(dim, lo), Vector::Constant(dim, hi));
}

bool Box::contains(const Vector& v, double slack) const {
  if (v.size() != lower_.size()) return false;
  for (int i = 0; i < v.size(); ++i) {
    if (v[i] < lower_[i] - slack || v[i] > upper_[i] + slack) return false;
  }
  return true;
}

Vector Box::clamp(const Vector& v) const { return v.cwiseMax(lower_).cwiseMin(upper_); }

Box Box::intersect(const Box& other) const {
  return Box(lower_.cwiseMax(other.lower_), upper_.cwiseMin(other.upper_));
}

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

Vector scalar(double v) {
  Vector out(1);
  out[0] = v;
  return out;
}

std::string format_point(const Vector& v, int precision) {
  std::ostringstream os;
  os.precision(precision);
  if (v.size() == 1) {
    os << v[0];
    return os.str();
  }
  os << '(';
  for (int i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    os << v[i];
  }
  os << ')';
  return os.str();
}

}  // namespace riskaverse
