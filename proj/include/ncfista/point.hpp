#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace ncfista {

/// Layout of a Point's coefficient array.
///
/// Matrices are stored column-major. A matrix pair (V, W) with V of size
/// rows x cols and W of size rows2 x cols2 stores V first, then W.
struct Shape {
  enum class Kind { vector, matrix, matrix_pair };

  Kind kind = Kind::vector;
  Eigen::Index rows = 0;
  Eigen::Index cols = 1;
  Eigen::Index rows2 = 0;
  Eigen::Index cols2 = 0;

  static Shape vector(Eigen::Index n) { return {Kind::vector, n, 1, 0, 0}; }
  static Shape matrix(Eigen::Index r, Eigen::Index c) { return {Kind::matrix, r, c, 0, 0}; }
  static Shape matrix_pair(Eigen::Index r1, Eigen::Index c1, Eigen::Index r2, Eigen::Index c2) {
    return {Kind::matrix_pair, r1, c1, r2, c2};
  }

  Eigen::Index size() const { return rows * cols + rows2 * cols2; }

  friend bool operator==(const Shape&, const Shape&) = default;

  std::string to_string() const {
    switch (kind) {
      case Kind::vector:
        return "vector(" + std::to_string(rows) + ")";
      case Kind::matrix:
        return "matrix(" + std::to_string(rows) + "x" + std::to_string(cols) + ")";
      case Kind::matrix_pair:
        return "pair(" + std::to_string(rows) + "x" + std::to_string(cols) + ", " +
               std::to_string(rows2) + "x" + std::to_string(cols2) + ")";
    }
    return "?";
  }
};

class ShapeMismatch : public std::invalid_argument {
 public:
  ShapeMismatch(const Shape& a, const Shape& b)
      : std::invalid_argument("shape mismatch: " + a.to_string() + " vs " + b.to_string()) {}
};

/// Dense real point in one of the supported shapes.
///
/// All arithmetic requires identical shapes and throws ShapeMismatch
/// otherwise.
class Point {
 public:
  using MatrixMap = Eigen::Map<Eigen::MatrixXd>;
  using ConstMatrixMap = Eigen::Map<const Eigen::MatrixXd>;

  Point() = default;

  /// Zero point of the given shape.
  explicit Point(const Shape& shape) : shape_(shape), data_(Eigen::VectorXd::Zero(shape.size())) {}

  /// Throws std::invalid_argument if the sizes disagree or an entry is not finite.
  Point(const Shape& shape, Eigen::VectorXd data) : shape_(shape), data_(std::move(data)) {
    if (data_.size() != shape_.size()) {
      throw std::invalid_argument("point data size " + std::to_string(data_.size()) +
                                  " does not match " + shape_.to_string());
    }
    if (!all_finite()) throw std::invalid_argument("point has non-finite entries");
  }

  static Point from_vector(const Eigen::VectorXd& v) { return Point(Shape::vector(v.size()), v); }

  static Point from_matrix(const Eigen::MatrixXd& m) {
    return Point(Shape::matrix(m.rows(), m.cols()),
                 Eigen::Map<const Eigen::VectorXd>(m.data(), m.size()));
  }

  static Point from_pair(const Eigen::MatrixXd& v, const Eigen::MatrixXd& w) {
    Eigen::VectorXd data(v.size() + w.size());
    data.head(v.size()) = Eigen::Map<const Eigen::VectorXd>(v.data(), v.size());
    data.tail(w.size()) = Eigen::Map<const Eigen::VectorXd>(w.data(), w.size());
    return Point(Shape::matrix_pair(v.rows(), v.cols(), w.rows(), w.cols()), std::move(data));
  }

  const Shape& shape() const { return shape_; }
  Eigen::Index size() const { return data_.size(); }
  const Eigen::VectorXd& data() const { return data_; }
  Eigen::VectorXd& data() { return data_; }

  bool all_finite() const { return data_.allFinite(); }

  /// The first (or only) matrix block. For vectors this is an n x 1 view.
  ConstMatrixMap matrix() const { return {data_.data(), shape_.rows, shape_.cols}; }
  MatrixMap matrix() { return {data_.data(), shape_.rows, shape_.cols}; }

  /// Second block of a matrix pair.
  ConstMatrixMap second() const {
    require_pair();
    return {data_.data() + shape_.rows * shape_.cols, shape_.rows2, shape_.cols2};
  }
  MatrixMap second() {
    require_pair();
    return {data_.data() + shape_.rows * shape_.cols, shape_.rows2, shape_.cols2};
  }

  double norm() const { return data_.norm(); }
  double squared_norm() const { return data_.squaredNorm(); }

  double dot(const Point& other) const {
    check_same(other);
    return data_.dot(other.data_);
  }

  void check_same(const Point& other) const {
    if (!(shape_ == other.shape_)) throw ShapeMismatch(shape_, other.shape_);
  }

  Point& operator+=(const Point& o) {
    check_same(o);
    data_ += o.data_;
    return *this;
  }
  Point& operator-=(const Point& o) {
    check_same(o);
    data_ -= o.data_;
    return *this;
  }
  Point& operator*=(double s) {
    data_ *= s;
    return *this;
  }

  friend Point operator+(Point a, const Point& b) { return a += b; }
  friend Point operator-(Point a, const Point& b) { return a -= b; }
  friend Point operator*(double s, Point a) { return a *= s; }
  friend Point operator*(Point a, double s) { return a *= s; }
  friend Point operator-(Point a) { return a *= -1.0; }

  /// this <- alpha * this + beta * other
  Point& blend(double alpha, double beta, const Point& other) {
    check_same(other);
    data_ = alpha * data_ + beta * other.data_;
    return *this;
  }

 private:
  void require_pair() const {
    if (shape_.kind != Shape::Kind::matrix_pair) {
      throw std::logic_error("second block requested on " + shape_.to_string());
    }
  }

  Shape shape_;
  Eigen::VectorXd data_;
};

inline double distance(const Point& a, const Point& b) {
  a.check_same(b);
  return (a.data() - b.data()).norm();
}

/// alpha * a + beta * b
inline Point combine(double alpha, const Point& a, double beta, const Point& b) {
  Point out = a;
  out.blend(alpha, beta, b);
  return out;
}

}  // namespace ncfista
