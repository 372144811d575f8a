#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "knnreal/error.hpp"
#include "knnreal/rational.hpp"

namespace knnreal {

/// n points in R^d stored row-major. Points are pairwise distinct.
template <class Scalar>
class BasicPointSet {
 public:
  using scalar_type = Scalar;

  BasicPointSet() = default;

  BasicPointSet(std::size_t dim, std::vector<Scalar> coords)
      : dim_(dim), coords_(std::move(coords)) {
    if (dim_ == 0)
      throw Error(ErrorCode::DimensionMismatch, "dimension must be positive");
    if (coords_.size() % dim_ != 0)
      throw Error(ErrorCode::DimensionMismatch,
                  std::to_string(coords_.size()) +
                      " coordinates do not split into points of dimension " +
                      std::to_string(dim_));
    check_distinct();
  }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  bool empty() const noexcept { return size() == 0; }

  std::span<const Scalar> operator[](std::size_t i) const noexcept {
    return {coords_.data() + i * dim_, dim_};
  }
  const std::vector<Scalar>& coords() const noexcept { return coords_; }

  friend bool operator==(const BasicPointSet&, const BasicPointSet&) = default;

 private:
  void check_distinct() const {
    std::vector<std::size_t> idx(size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    auto lex_less = [this](std::size_t a, std::size_t b) {
      const auto pa = (*this)[a];
      const auto pb = (*this)[b];
      return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end());
    };
    std::sort(idx.begin(), idx.end(), lex_less);
    for (std::size_t i = 1; i < idx.size(); ++i)
      if (!lex_less(idx[i - 1], idx[i]))
        throw Error(ErrorCode::DuplicatePoint,
                    "points " + std::to_string(idx[i - 1]) + " and " +
                        std::to_string(idx[i]) + " coincide");
  }

  std::size_t dim_ = 0;
  std::vector<Scalar> coords_;
};

using PointSet = BasicPointSet<Rational>;
using FloatPointSet = BasicPointSet<double>;

inline PointSet to_exact(const FloatPointSet& p) {
  std::vector<Rational> c;
  c.reserve(p.coords().size());
  for (double x : p.coords()) c.push_back(to_rational(x));
  return PointSet(p.dim(), std::move(c));
}

inline FloatPointSet to_float(const PointSet& p) {
  std::vector<double> c;
  c.reserve(p.coords().size());
  for (const auto& x : p.coords()) c.push_back(x.get_d());
  return FloatPointSet(p.dim(), std::move(c));
}

enum class Provenance { ExactLine, HeuristicComponent, UserSupplied };

/// Vertex v sits at points[assignment[v]].
template <class Scalar>
struct BasicRealization {
  BasicPointSet<Scalar> points;
  std::vector<std::uint32_t> assignment;
  Provenance provenance = Provenance::UserSupplied;

  std::span<const Scalar> position(std::size_t v) const noexcept {
    return points[assignment[v]];
  }
};

using Realization = BasicRealization<Rational>;
using FloatRealization = BasicRealization<double>;

/// Realization with vertex v placed at point v.
template <class Scalar>
BasicRealization<Scalar> identity_realization(BasicPointSet<Scalar> points,
                                              Provenance prov = Provenance::UserSupplied) {
  BasicRealization<Scalar> r;
  r.assignment.resize(points.size());
  std::iota(r.assignment.begin(), r.assignment.end(), std::uint32_t{0});
  r.points = std::move(points);
  r.provenance = prov;
  return r;
}

template <class Scalar>
Scalar squared_distance(std::span<const Scalar> a, std::span<const Scalar> b) {
  Scalar s = 0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    Scalar t = a[j] - b[j];
    s += t * t;
  }
  return s;
}

/// Comparison policy for squared distances. Exact for rationals; for doubles
/// a relative margin absorbs rounding (strict needs clearance, non-strict
/// tolerates it).
template <class Scalar>
struct DistanceOrder {
  bool less(const Scalar& a, const Scalar& b) const { return a < b; }
  bool less_equal(const Scalar& a, const Scalar& b) const { return a <= b; }
  bool equal(const Scalar& a, const Scalar& b) const { return a == b; }
};

template <>
struct DistanceOrder<double> {
  double margin = 1e-9;

  bool less(double a, double b) const { return a < b - margin * std::max(a, b); }
  bool less_equal(double a, double b) const { return a <= b + margin * std::max(a, b); }
  bool equal(double a, double b) const { return !less(a, b) && !less(b, a); }
};

}  // namespace knnreal
