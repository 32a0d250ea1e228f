#include "sandtone/converter.hpp"
#include "sandtone/error.hpp"
#include "sandtone/parallel.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace sandtone;

namespace {

MixturePlan four_sand_plan() {
  std::vector<SandSample> sands;
  sands.push_back(make_sand("A", "A", testing::noisy_sand(32, 32, 20, 12, 1)));
  sands.push_back(make_sand("B", "B", testing::noisy_sand(32, 32, 90, 12, 2)));
  sands.push_back(make_sand("C", "C", testing::noisy_sand(32, 32, 150, 12, 3)));
  sands.push_back(make_sand("D", "D", testing::noisy_sand(32, 32, 230, 12, 4)));
  return build_plan(sands, 16);
}

RenderJob job_for(RgbImage source, MixturePlan plan, int block, std::uint64_t seed = 1) {
  RenderJob job;
  job.source = std::move(source);
  job.table = default_table(plan.set_size);
  job.plan = std::move(plan);
  job.block_size = block;
  job.seed = seed;
  job.swatch_params = {64, 64, 0};
  return job;
}

bool block_matches_window(const RgbImage& out, int bx, int by, int b, const RgbImage& tex) {
  for (int oy = 0; oy + b <= tex.height(); ++oy) {
    for (int ox = 0; ox + b <= tex.width(); ++ox) {
      bool same = true;
      for (int dy = 0; dy < b && same; ++dy)
        for (int dx = 0; dx < b && same; ++dx) same = out.at(bx * b + dx, by * b + dy) == tex.at(ox + dx, oy + dy);
      if (same) return true;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("default table for sixteen slots is the published assignment") {
  auto t = default_table(16);
  CHECK(t.range(1) == std::pair{0, 15});
  CHECK(t.range(7) == std::pair{96, 111});
  CHECK(t.range(16) == std::pair{240, 255});
  for (int k = 1; k <= 16; ++k) CHECK(t.range(k) == std::pair{16 * (k - 1), 16 * k - 1});
}

TEST_CASE("default table small sizes") {
  CHECK(default_table(1).range(1) == std::pair{0, 255});
  auto t3 = default_table(3);
  CHECK(t3.range(1) == std::pair{0, 85});
  CHECK(t3.range(2) == std::pair{86, 170});
  CHECK(t3.range(3) == std::pair{171, 255});
  CHECK_THROWS_WITH_AS(default_table(0), "invalid set size", Error);
  CHECK_THROWS_WITH_AS(default_table(257), "invalid set size", Error);
}

TEST_CASE("default table widths are balanced with extras at the dark end") {
  for (int n = 1; n <= 256; ++n) {
    auto t = default_table(n);
    REQUIRE(t.set_size() == n);
    int prev_width = 1 << 20;
    int covered = 0;
    int lo = 256, hi = 0;
    for (int k = 1; k <= n; ++k) {
      auto [a, b] = t.range(k);
      REQUIRE(a == covered);
      const int w = b - a + 1;
      REQUIRE(w <= prev_width);
      prev_width = w;
      lo = std::min(lo, w);
      hi = std::max(hi, w);
      covered = b + 1;
    }
    REQUIRE(covered == 256);
    REQUIRE(hi - lo <= 1);
  }
}

TEST_CASE("lookup against the sixteen-range assignment") {
  auto t = default_table(16);
  CHECK(lookup(t, 0) == 1);
  CHECK(lookup(t, 100) == 7);
  CHECK(lookup(t, 255) == 16);
  for (int g = 0; g < 256; ++g) REQUIRE(lookup(t, g) == g / 16 + 1);
  CHECK_THROWS_AS(lookup(t, 256), Error);
}

TEST_CASE("adjust_table") {
  auto t = default_table(16);
  auto moved = adjust_table(t, 1, 20);
  CHECK(moved.range(1) == std::pair{0, 19});
  CHECK(moved.range(2) == std::pair{20, 31});
  for (int g = 0; g < 256; ++g) REQUIRE(lookup(moved, g) == (g < 20 ? 1 : g / 16 + 1));

  CHECK_THROWS_WITH_AS(adjust_table(t, 1, 32), "threshold collision", Error);
  CHECK_THROWS_WITH_AS(adjust_table(t, 1, 0), "threshold collision", Error);
  CHECK(t == default_table(16));
  CHECK(adjust_table(t, 5, 80) == t);
  CHECK_THROWS_WITH_AS(adjust_table(t, 0, 5), "threshold index out of range", Error);
  CHECK_THROWS_WITH_AS(adjust_table(t, 16, 250), "threshold index out of range", Error);
}

TEST_CASE("table_from_interior") {
  CHECK(table_from_interior({128}) == default_table(2));
  CHECK_THROWS_WITH_AS(table_from_interior({100, 100}), "threshold collision", Error);
  CHECK_THROWS_WITH_AS(table_from_interior({0}), "threshold collision", Error);
  CHECK_THROWS_WITH_AS(table_from_interior({256}), "threshold collision", Error);
}

TEST_CASE("single black pixel renders from the slot-1 texture") {
  auto plan = four_sand_plan();
  auto job = job_for(RgbImage(1, 1, Rgb{0, 0, 0}), plan, 8);
  auto out = render(job);
  CHECK(out.image.width() == 8);
  CHECK(out.image.height() == 8);
  CHECK(out.slot_map.at(0, 0) == 1);
  SynthesisParams p = job.swatch_params;
  p.seed = swatch_seed(job.seed, 1);
  auto tex = synthesize(plan.mixtures[0], sand_images(plan), p);
  auto [ox, oy] = window_offset(job.seed, 0, 0, 8, 64, 64);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) REQUIRE(out.image.at(x, y) == tex.image.at(ox + x, oy + y));
}

TEST_CASE("constant sands render exact blocks") {
  auto plan = build_plan({testing::constant_sand("dark", 30), testing::constant_sand("light", 220)}, 2);
  auto job = job_for(RgbImage(2, 1, {Rgb{0, 0, 0}, Rgb{255, 255, 255}}), plan, 2);
  auto out = render(job);
  REQUIRE(out.image.width() == 4);
  REQUIRE(out.image.height() == 2);
  for (int y = 0; y < 2; ++y) {
    CHECK(out.image.at(0, y) == Rgb{30, 30, 30});
    CHECK(out.image.at(1, y) == Rgb{30, 30, 30});
    CHECK(out.image.at(2, y) == Rgb{220, 220, 220});
    CHECK(out.image.at(3, y) == Rgb{220, 220, 220});
  }
}

TEST_CASE("uniform source keeps one slot and its tone") {
  auto plan = four_sand_plan();
  auto job = job_for(RgbImage(12, 10, Rgb{100, 100, 100}), plan, 8);
  auto out = render(job);
  for (int s : out.slot_map.slots) REQUIRE(s == 7);
  CHECK(std::abs(mean_gray_rgb(out.image).mean - plan.mixtures[6].expected_gray) <= 4.0);
}

TEST_CASE("every block is a window of its slot texture") {
  auto plan = four_sand_plan();
  RgbImage src(6, 4);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 6; ++x) src.at(x, y) = Rgb{static_cast<std::uint8_t>(x * 45), 0, static_cast<std::uint8_t>(y * 60)};
  auto job = job_for(src, plan, 3);
  job.swatch_params = {12, 12, 0};
  auto out = render(job);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 6; ++x) {
      SynthesisParams p = job.swatch_params;
      const int slot = out.slot_map.at(x, y);
      p.seed = swatch_seed(job.seed, slot);
      auto tex = synthesize(plan.mixtures[slot - 1], sand_images(plan), p);
      REQUIRE(block_matches_window(out.image, x, y, 3, tex.image));
    }
  }
}

TEST_CASE("render is deterministic across thread counts") {
  auto plan = four_sand_plan();
  RgbImage src(20, 13);
  for (int y = 0; y < 13; ++y)
    for (int x = 0; x < 20; ++x) src.at(x, y) = Rgb{static_cast<std::uint8_t>(x * 12), static_cast<std::uint8_t>(y * 19), 90};
  const unsigned saved = thread_count();
  set_thread_count(1);
  auto a = render(job_for(src, plan, 4, 5));
  set_thread_count(3);
  auto b = render(job_for(src, plan, 4, 5));
  set_thread_count(saved);
  CHECK(a.image == b.image);
  CHECK(a.slot_map.slots == b.slot_map.slots);
}

TEST_CASE("render errors") {
  auto plan = four_sand_plan();
  auto job = job_for(RgbImage(2, 2, Rgb{9, 9, 9}), plan, 8);
  job.table = default_table(8);
  CHECK_THROWS_WITH_AS(render(job), "size mismatch", Error);
  job = job_for(RgbImage{}, plan, 8);
  CHECK_THROWS_WITH_AS(render(job), "empty image", Error);
  job = job_for(RgbImage(2, 2), plan, 1);
  CHECK_THROWS_AS(render(job), Error);
  job = job_for(RgbImage(2, 2), plan, 100);
  CHECK_THROWS_WITH_AS(render(job), "block larger than swatch", Error);
}

TEST_CASE("side by side layout") {
  auto plan = four_sand_plan();
  auto job = job_for(RgbImage(1, 1, Rgb{200, 10, 10}), plan, 8);
  auto img = render_side_by_side(job);
  CHECK(img.width() == 24);
  CHECK(img.height() == 8);
  CHECK(img.at(0, 0) == Rgb{200, 10, 10});
  CHECK(img.at(7, 7) == Rgb{200, 10, 10});
  for (int x = 8; x < 16; ++x) CHECK(img.at(x, 3) == Rgb{255, 255, 255});
  CHECK(render_side_by_side(job) == img);
  CHECK_THROWS_AS(render_side_by_side(job_for(RgbImage{}, plan, 8)), Error);

  auto wide = compose_side_by_side(RgbImage(3, 2, Rgb{1, 2, 3}), RgbImage(10, 4));
  CHECK(wide.width() == 6 + 8 + 10);
}

TEST_CASE("slot map JSON") {
  SlotMap m{2, 1, {1, 16}};
  auto doc = slot_map_to_json(m, 8);
  CHECK(doc.dump() == R"({"width":2,"height":1,"block_size":8,"slots":[1,16]})");
}
