#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace qconvex {

// Axis convention used everywhere in the library: the first index (row,
// increasing downward) is the x-axis, the second index (column) is the
// y-axis. Grid spacing is one pixel.

/// Dense row-major H x W field of doubles. Holds masks (values in [0,1])
/// as well as logits. Value type: library operations never mutate inputs.
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(std::size_t height, std::size_t width, double fill = 0.0);
  ScalarField(std::size_t height, std::size_t width, std::vector<double> data);

  template <class F>
  static ScalarField generate(std::size_t height, std::size_t width, F&& f) {
    ScalarField out(height, width);
    for (std::size_t i = 0; i < height; ++i)
      for (std::size_t j = 0; j < width; ++j) out(i, j) = f(i, j);
    return out;
  }

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * width_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * width_ + j]; }

  bool contains(long i, long j) const {
    return i >= 0 && j >= 0 && i < static_cast<long>(height_) && j < static_cast<long>(width_);
  }
  // Zero-padded read.
  double value_or_zero(long i, long j) const {
    return contains(i, j) ? data_[static_cast<std::size_t>(i) * width_ + static_cast<std::size_t>(j)]
                          : 0.0;
  }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  bool same_shape(const ScalarField& other) const {
    return height_ == other.height_ && width_ == other.width_;
  }

  bool all_finite() const;
  bool is_mask() const;  // every entry in [0,1]
  double max() const;
  double min() const;
  double sum() const;

  friend bool operator==(const ScalarField&, const ScalarField&) = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<double> data_;
};

/// Exactly-binary field; holds a super-level set.
class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(std::size_t height, std::size_t width, bool fill = false);

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  std::size_t size() const { return data_.size(); }

  bool operator()(std::size_t i, std::size_t j) const { return data_[i * width_ + j] != 0; }
  void set(std::size_t i, std::size_t j, bool v) { data_[i * width_ + j] = v ? 1 : 0; }
  bool contains(long i, long j) const {
    return i >= 0 && j >= 0 && i < static_cast<long>(height_) && j < static_cast<long>(width_);
  }
  bool value_or_false(long i, long j) const {
    return contains(i, j) && (*this)(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  }

  std::size_t count() const;
  ScalarField to_field() const;

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<std::uint8_t> data_;
};

struct Offset {
  int dx = 0;  // rows
  int dy = 0;  // columns
  friend bool operator==(const Offset&, const Offset&) = default;
  friend auto operator<=>(const Offset&, const Offset&) = default;
};

/// Integer offsets d with 0 < |d|_2 <= radius, in lexicographic order.
struct OffsetSet {
  double radius = 1.0;
  std::vector<Offset> offsets;

  std::size_t size() const { return offsets.size(); }
  auto begin() const { return offsets.begin(); }
  auto end() const { return offsets.end(); }
};

OffsetSet make_offsets(double radius);

/// Integer offsets with |d|_2 <= radius including the origin (discrete ball).
std::vector<Offset> make_ball(double radius);

double linf_distance(const ScalarField& a, const ScalarField& b);
double dot(const ScalarField& a, const ScalarField& b);

/// Pixel is set iff u >= gamma.
BinaryMask threshold(const ScalarField& u, double gamma);

void require_same_shape(const ScalarField& a, const ScalarField& b, const char* what);

}  // namespace qconvex
