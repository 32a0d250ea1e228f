#include "sandtone/error.hpp"
#include "sandtone/image.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

using namespace sandtone;

namespace {

// Independent rational oracle: round_half_up(s / 3) == floor((2s + 3) / 6).
int oracle_gray(int r, int g, int b) {
  const int s = r + g + b;
  return (2 * s + 3) / 6;
}

}  // namespace

TEST_CASE("to_grayscale averages channels") {
  CHECK(to_grayscale(RgbImage(1, 1, Rgb{10, 20, 30})).at(0, 0) == 20);
  CHECK(to_grayscale(RgbImage(1, 1, Rgb{255, 255, 255})).at(0, 0) == 255);
  CHECK(to_grayscale(RgbImage(1, 1, Rgb{1, 2, 2})).at(0, 0) == 2);
  CHECK(oracle_gray(1, 2, 2) == 2);
}

TEST_CASE("gray_of matches the rational oracle for every channel sum") {
  for (int s = 0; s <= 765; ++s) {
    const int r = std::min(s, 255);
    const int g = std::min(s - r, 255);
    const int b = s - r - g;
    const Rgb p{static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g), static_cast<std::uint8_t>(b)};
    REQUIRE(gray_of(p) == oracle_gray(r, g, b));
  }
}

TEST_CASE("to_grayscale keeps dimensions") {
  RgbImage img(3, 2, Rgb{9, 9, 9});
  GrayImage g = to_grayscale(img);
  CHECK(g.width() == 3);
  CHECK(g.height() == 2);
}

TEST_CASE("mean_gray examples") {
  CHECK(mean_gray(GrayImage(4, 4, 128)).mean == 128.0);
  CHECK(mean_gray(GrayImage(2, 1, {0, 255})).mean == 127.5);
  GrayStat s = mean_gray(GrayImage(2, 2, {0, 0, 255, 255}));
  CHECK(s.mean == 127.5);
  CHECK(s.pixel_count == 4);
  CHECK_THROWS_WITH_AS(mean_gray(GrayImage{}), "empty image", Error);
}

TEST_CASE("mean_gray_rgb examples") {
  CHECK(mean_gray_rgb(RgbImage(1, 1, Rgb{255, 255, 255})).mean == 255.0);
  CHECK(mean_gray_rgb(RgbImage(1, 1, Rgb{0, 0, 0})).mean == 0.0);
  CHECK(mean_gray_rgb(RgbImage(2, 1, {Rgb{0, 0, 0}, Rgb{255, 255, 255}})).mean == 127.5);
  CHECK_THROWS_AS(mean_gray_rgb(RgbImage{}), Error);
}

TEST_CASE("image constructors reject mismatched buffers") {
  CHECK_THROWS_AS(RgbImage(2, 2, std::vector<Rgb>(3)), Error);
  CHECK_THROWS_AS(GrayImage(2, 2, std::vector<std::uint8_t>(5)), Error);
  CHECK_THROWS_AS(RgbImage(-1, 2), Error);
}

TEST_CASE("grayscale properties on random images") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    RgbImage img = testing::random_image(rng);
    GrayImage g = to_grayscale(img);

    double true_sum = 0.0;
    for (int y = 0; y < img.height(); ++y) {
      for (int x = 0; x < img.width(); ++x) {
        const Rgb p = img.at(x, y);
        const int lo = std::min({p.r, p.g, p.b});
        const int hi = std::max({p.r, p.g, p.b});
        REQUIRE(g.at(x, y) >= lo);
        REQUIRE(g.at(x, y) <= hi);
        true_sum += (p.r + p.g + p.b) / 3.0;
      }
    }
    const double m = mean_gray(g).mean;
    REQUIRE(std::abs(m - true_sum / img.size()) < 0.5);
    REQUIRE(mean_gray_rgb(img).mean == m);

    std::vector<std::uint8_t> shuffled(g.pixels().begin(), g.pixels().end());
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    REQUIRE(mean_gray(GrayImage(g.width(), g.height(), shuffled)).mean == m);
  }
}

TEST_CASE("crop copies a sub-rectangle") {
  RgbImage img(4, 3);
  for (int y = 0; y < 3; ++y)
    for (int x = 0; x < 4; ++x) img.at(x, y) = {static_cast<std::uint8_t>(x), static_cast<std::uint8_t>(y), 0};
  RgbImage c = crop(img, {1, 1, 2, 2});
  CHECK(c.width() == 2);
  CHECK(c.at(0, 0) == Rgb{1, 1, 0});
  CHECK(c.at(1, 1) == Rgb{2, 2, 0});
  CHECK_THROWS_AS(crop(img, {3, 0, 2, 1}), Error);
  CHECK_THROWS_AS(crop(img, {0, 0, 0, 1}), Error);
}
