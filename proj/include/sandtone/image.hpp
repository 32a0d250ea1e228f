#pragma once

// Pixel buffers and the gray statistics the rest of the toolkit is built on.
//
// Gray semantics are 8-bit: 0 is black, 255 is white. RGB to gray uses the
// plain average of the three channels (not a luminance weighting), rounded
// half up.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace sandtone {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Row-major RGB image. A default-constructed image is empty (0x0).
class RgbImage {
 public:
  RgbImage() = default;
  RgbImage(int width, int height, Rgb fill = {});
  RgbImage(int width, int height, std::vector<Rgb> pixels);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return pixels_.size(); }
  bool empty() const noexcept { return pixels_.empty(); }

  Rgb& at(int x, int y) { return pixels_[index(x, y)]; }
  const Rgb& at(int x, int y) const { return pixels_[index(x, y)]; }

  std::span<Rgb> pixels() noexcept { return pixels_; }
  std::span<const Rgb> pixels() const noexcept { return pixels_; }

  friend bool operator==(const RgbImage&, const RgbImage&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<Rgb> pixels_;
};

class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(int width, int height, std::uint8_t fill = 0);
  GrayImage(int width, int height, std::vector<std::uint8_t> pixels);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return pixels_.size(); }
  bool empty() const noexcept { return pixels_.empty(); }

  std::uint8_t& at(int x, int y) { return pixels_[index(x, y)]; }
  std::uint8_t at(int x, int y) const { return pixels_[index(x, y)]; }

  std::span<std::uint8_t> pixels() noexcept { return pixels_; }
  std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

struct GrayStat {
  double mean = 0.0;  // in [0, 255], unrounded
  std::size_t pixel_count = 0;
};

struct CropRect {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;
};

/// Average-method gray of one pixel: round_half_up((r + g + b) / 3).
constexpr std::uint8_t gray_of(Rgb p) noexcept {
  // (r+g+b)/3 never has a fractional part of exactly one half, so adding one
  // before the integer division is the same as rounding half up.
  return static_cast<std::uint8_t>((unsigned{p.r} + p.g + p.b + 1u) / 3u);
}

GrayImage to_grayscale(const RgbImage& img);

/// Throws Error("empty image") on an empty input.
GrayStat mean_gray(const GrayImage& img);
GrayStat mean_gray_rgb(const RgbImage& img);

/// Sub-rectangle copy; the rectangle must lie fully inside the image.
RgbImage crop(const RgbImage& img, const CropRect& rect);

}  // namespace sandtone
