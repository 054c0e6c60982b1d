#pragma once

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace lfd {

/// Dense row-major 2D grid indexed (y, x).
template <typename T>
class Array2D {
public:
  Array2D() = default;
  Array2D(int height, int width, T init = T{})
      : height_(height), width_(width),
        data_(static_cast<std::size_t>(height) * static_cast<std::size_t>(width), init) {}

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  bool contains(int y, int x) const noexcept {
    return y >= 0 && y < height_ && x >= 0 && x < width_;
  }

  T& operator()(int y, int x) {
    assert(contains(y, x));
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }
  const T& operator()(int y, int x) const {
    assert(contains(y, x));
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }

  std::span<T> row(int y) { return {data_.data() + static_cast<std::size_t>(y) * width_, static_cast<std::size_t>(width_)}; }
  std::span<const T> row(int y) const {
    return {data_.data() + static_cast<std::size_t>(y) * width_, static_cast<std::size_t>(width_)};
  }

  std::vector<T>& data() noexcept { return data_; }
  const std::vector<T>& data() const noexcept { return data_; }

  void fill(const T& v) { std::fill(data_.begin(), data_.end(), v); }

  bool same_shape(const Array2D& o) const noexcept { return height_ == o.height_ && width_ == o.width_; }

  friend bool operator==(const Array2D&, const Array2D&) = default;

private:
  int height_ = 0;
  int width_ = 0;
  std::vector<T> data_;
};

} // namespace lfd
