#include "sandtone/image.hpp"

#include "sandtone/error.hpp"

#include <string>
#include <utility>

namespace sandtone {

namespace {

std::size_t checked_area(int width, int height) {
  if (width < 0 || height < 0) fail("negative image dimensions");
  if ((width == 0) != (height == 0)) fail("degenerate image dimensions");
  return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
}

}  // namespace

RgbImage::RgbImage(int width, int height, Rgb fill)
    : width_(width), height_(height), pixels_(checked_area(width, height), fill) {}

RgbImage::RgbImage(int width, int height, std::vector<Rgb> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (pixels_.size() != checked_area(width, height)) {
    fail("pixel count " + std::to_string(pixels_.size()) + " does not match " +
         std::to_string(width) + "x" + std::to_string(height));
  }
}

GrayImage::GrayImage(int width, int height, std::uint8_t fill)
    : width_(width), height_(height), pixels_(checked_area(width, height), fill) {}

GrayImage::GrayImage(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (pixels_.size() != checked_area(width, height)) {
    fail("pixel count " + std::to_string(pixels_.size()) + " does not match " +
         std::to_string(width) + "x" + std::to_string(height));
  }
}

GrayImage to_grayscale(const RgbImage& img) {
  std::vector<std::uint8_t> out;
  out.reserve(img.size());
  for (const Rgb& p : img.pixels()) out.push_back(gray_of(p));
  return GrayImage(img.width(), img.height(), std::move(out));
}

GrayStat mean_gray(const GrayImage& img) {
  if (img.empty()) fail("empty image");
  // Sums of up to 2^45 pixels stay exact in 64 bits.
  std::uint64_t sum = 0;
  for (std::uint8_t v : img.pixels()) sum += v;
  return {static_cast<double>(sum) / static_cast<double>(img.size()), img.size()};
}

GrayStat mean_gray_rgb(const RgbImage& img) {
  if (img.empty()) fail("empty image");
  std::uint64_t sum = 0;
  for (const Rgb& p : img.pixels()) sum += gray_of(p);
  return {static_cast<double>(sum) / static_cast<double>(img.size()), img.size()};
}

RgbImage crop(const RgbImage& img, const CropRect& rect) {
  if (rect.width <= 0 || rect.height <= 0 || rect.x < 0 || rect.y < 0 ||
      rect.x + rect.width > img.width() || rect.y + rect.height > img.height()) {
    fail("crop rectangle outside image");
  }
  RgbImage out(rect.width, rect.height);
  for (int y = 0; y < rect.height; ++y)
    for (int x = 0; x < rect.width; ++x) out.at(x, y) = img.at(rect.x + x, rect.y + y);
  return out;
}

}  // namespace sandtone
