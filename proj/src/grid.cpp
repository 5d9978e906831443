#include "qconvex/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qconvex {

ScalarField::ScalarField(std::size_t height, std::size_t width, double fill)
    : height_(height), width_(width), data_(height * width, fill) {}

ScalarField::ScalarField(std::size_t height, std::size_t width, std::vector<double> data)
    : height_(height), width_(width), data_(std::move(data)) {
  if (data_.size() != height_ * width_)
    throw std::invalid_argument("ScalarField: data length " + std::to_string(data_.size()) +
                                " does not match " + std::to_string(height_) + "x" +
                                std::to_string(width_));
}

bool ScalarField::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

bool ScalarField::is_mask() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return v >= 0.0 && v <= 1.0; });
}

double ScalarField::max() const {
  if (data_.empty()) throw std::invalid_argument("ScalarField::max on empty field");
  return *std::max_element(data_.begin(), data_.end());
}

double ScalarField::min() const {
  if (data_.empty()) throw std::invalid_argument("ScalarField::min on empty field");
  return *std::min_element(data_.begin(), data_.end());
}

double ScalarField::sum() const { return std::accumulate(data_.begin(), data_.end(), 0.0); }

BinaryMask::BinaryMask(std::size_t height, std::size_t width, bool fill)
    : height_(height), width_(width), data_(height * width, fill ? 1 : 0) {}

std::size_t BinaryMask::count() const {
  return static_cast<std::size_t>(std::count(data_.begin(), data_.end(), std::uint8_t{1}));
}

ScalarField BinaryMask::to_field() const {
  ScalarField out(height_, width_);
  for (std::size_t k = 0; k < data_.size(); ++k) out.values()[k] = data_[k];
  return out;
}

OffsetSet make_offsets(double radius) {
  if (!(radius >= 1.0)) throw std::invalid_argument("make_offsets: radius must be >= 1");
  OffsetSet set{radius, {}};
  const int reach = static_cast<int>(std::floor(radius));
  const double r2 = radius * radius;
  for (int a = -reach; a <= reach; ++a)
    for (int b = -reach; b <= reach; ++b) {
      const int n2 = a * a + b * b;
      if (n2 > 0 && n2 <= r2) set.offsets.push_back({a, b});
    }
  return set;
}

std::vector<Offset> make_ball(double radius) {
  if (!(radius >= 0.0)) throw std::invalid_argument("make_ball: negative radius");
  std::vector<Offset> ball;
  const int reach = static_cast<int>(std::floor(radius));
  for (int a = -reach; a <= reach; ++a)
    for (int b = -reach; b <= reach; ++b)
      if (a * a + b * b <= radius * radius) ball.push_back({a, b});
  return ball;
}

void require_same_shape(const ScalarField& a, const ScalarField& b, const char* what) {
  if (!a.same_shape(b))
    throw std::invalid_argument(std::string(what) + ": shape mismatch (" +
                                std::to_string(a.height()) + "x" + std::to_string(a.width()) +
                                " vs " + std::to_string(b.height()) + "x" +
                                std::to_string(b.width()) + ")");
}

double linf_distance(const ScalarField& a, const ScalarField& b) {
  require_same_shape(a, b, "linf_distance");
  double worst = 0.0;
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t k = 0; k < av.size(); ++k) worst = std::max(worst, std::abs(av[k] - bv[k]));
  return worst;
}

double dot(const ScalarField& a, const ScalarField& b) {
  require_same_shape(a, b, "dot");
  return std::inner_product(a.values().begin(), a.values().end(), b.values().begin(), 0.0);
}

BinaryMask threshold(const ScalarField& u, double gamma) {
  BinaryMask mask(u.height(), u.width());
  for (std::size_t i = 0; i < u.height(); ++i)
    for (std::size_t j = 0; j < u.width(); ++j) mask.set(i, j, u(i, j) >= gamma);
  return mask;
}

}  // namespace qconvex
