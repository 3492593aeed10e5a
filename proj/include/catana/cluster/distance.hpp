#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "catana/core/error.hpp"

namespace catana::cluster {

// Anything that can report a point count and a pairwise distance.
template <typename D>
concept DistanceSource = requires(const D& d, std::size_t i, std::size_t j) {
  { d.size() } -> std::convertible_to<std::size_t>;
  { d.distance(i, j) } -> std::convertible_to<double>;
};

// Dense row-major point set.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::size_t dim) : dim_(dim) {}
  PointSet(std::vector<double> values, std::size_t dim) : dim_(dim), values_(std::move(values)) {
    if (dim_ == 0 ? !values_.empty() : values_.size() % dim_ != 0) {
      throw ContractError("point values are not a multiple of the dimension");
    }
  }

  std::size_t size() const { return dim_ == 0 ? 0 : values_.size() / dim_; }
  std::size_t dim() const { return dim_; }
  std::span<const double> row(std::size_t i) const { return {values_.data() + i * dim_, dim_}; }
  const std::vector<double>& values() const { return values_; }

  template <typename T>
  void push_back(std::span<const T> point) {
    if (point.size() != dim_) throw ContractError("point dimension mismatch");
    values_.insert(values_.end(), point.begin(), point.end());
  }

 private:
  std::size_t dim_ = 0;
  std::vector<double> values_;
};

inline double euclidean(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return std::sqrt(s);
}

class EuclideanDistance {
 public:
  explicit EuclideanDistance(const PointSet& points) : points_(&points) {}
  std::size_t size() const { return points_->size(); }
  double distance(std::size_t i, std::size_t j) const {
    return euclidean(points_->row(i), points_->row(j));
  }

 private:
  const PointSet* points_;
};

// Precomputed n x n matrix. Construction enforces symmetry, a zero diagonal
// and finite non-negative entries.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  DistanceMatrix(std::vector<double> values, std::size_t n) : n_(n), values_(std::move(values)) {
    if (values_.size() != n_ * n_) throw ContractError("distance matrix is not square");
    for (std::size_t i = 0; i < n_; ++i) {
      if (at(i, i) != 0.0) {
        throw ContractError("distance matrix diagonal entry " + std::to_string(i) + " is not zero");
      }
      for (std::size_t j = i + 1; j < n_; ++j) {
        const double a = at(i, j);
        if (!std::isfinite(a) || a < 0.0) {
          throw ContractError("distance matrix has a negative or non-finite entry");
        }
        if (a != at(j, i)) {
          throw ContractError("distance matrix is not symmetric at (" + std::to_string(i) + ", " +
                              std::to_string(j) + ")");
        }
      }
    }
  }

  template <DistanceSource D>
  static DistanceMatrix from(const D& source) {
    const std::size_t n = source.size();
    std::vector<double> v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) v[i * n + j] = v[j * n + i] = source.distance(i, j);
    }
    return DistanceMatrix(std::move(v), n);
  }

  std::size_t size() const { return n_; }
  double distance(std::size_t i, std::size_t j) const { return at(i, j); }
  DistanceMatrix scaled(double factor) const {
    auto v = values_;
    for (double& x : v) x *= factor;
    return DistanceMatrix(std::move(v), n_);
  }

 private:
  double at(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }

  std::size_t n_ = 0;
  std::vector<double> values_;
};

}  // namespace catana::cluster
