#include "process.hpp"
#include "support.hpp"

#include "sandtone/image_io.hpp"
#include "sandtone/planner.hpp"
#include "sandtone/service.hpp"

#include <doctest.h>

#include <chrono>
#include <thread>

using namespace sandtone;
namespace fs = std::filesystem;
using testing::run_cli;

namespace {

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("sandtone_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string put_png(const fs::path& dir, const std::string& name, const RgbImage& img) {
  write_png(dir / name, img);
  return (dir / name).string();
}

std::vector<std::string> four_sands(const fs::path& dir) {
  return {put_png(dir, "c.png", testing::noisy_sand(24, 24, 150, 8, 3)),
          put_png(dir, "a.png", testing::noisy_sand(24, 24, 20, 8, 1)),
          put_png(dir, "d.png", testing::noisy_sand(24, 24, 230, 8, 4)),
          put_png(dir, "b.png", testing::noisy_sand(24, 24, 90, 8, 2))};
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

TEST_CASE("analyze reports means in order") {
  auto dir = fresh_dir("analyze");
  auto white = put_png(dir, "white.png", testing::constant_image(4, 4, 255));
  auto black = put_png(dir, "black.png", testing::constant_image(4, 4, 0));
  auto r = run_cli({"analyze", white, black}, dir / "run");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("mean gray 255.00") != std::string::npos);
  const auto order = r.out.substr(r.out.find("darkest to lightest:"));
  CHECK(order.find("black.png") < order.find("white.png"));
  CHECK(order.find("0.00") < order.find("255.00"));

  auto four = run_cli(concat({"analyze"}, four_sands(dir)), dir / "run4");
  CHECK(four.exit_code == 0);
  const auto rows = four.out.substr(four.out.find("darkest to lightest:"));
  CHECK(rows.find("A  " + (dir / "a.png").string()) != std::string::npos);
  CHECK(rows.find("D  " + (dir / "d.png").string()) != std::string::npos);

  auto missing = run_cli({"analyze", (dir / "nope.png").string()}, dir / "run_missing");
  CHECK(missing.exit_code == 2);
  CHECK(missing.err.find("cannot read " + (dir / "nope.png").string()) != std::string::npos);

  write_file(dir / "junk.png", std::string("not an image"));
  auto junk = run_cli({"analyze", (dir / "junk.png").string()}, dir / "run_junk");
  CHECK(junk.exit_code != 0);
  CHECK(junk.err.find("junk.png") != std::string::npos);
}

TEST_CASE("plan writes a recipe per slot") {
  auto dir = fresh_dir("plan");
  auto a = put_png(dir, "dark.png", testing::noisy_sand(16, 16, 40, 6, 1));
  auto b = put_png(dir, "light.png", testing::noisy_sand(16, 16, 200, 6, 2));
  auto r = run_cli({"plan", a, b, "--set-size", "16", "--out", (dir / "out").string()}, dir / "run");
  REQUIRE(r.exit_code == 0);
  const std::string csv = testing::slurp(dir / "out" / "recipe.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 17);
  CHECK(fs::exists(dir / "out" / "sands" / "dark.png"));
  auto plan = plan_from_json_text(testing::slurp(dir / "out" / "plan.json"));
  CHECK(plan.mixtures.size() == 16);

  auto one = run_cli({"plan", a, "--out", (dir / "one").string()}, dir / "run1");
  CHECK(one.exit_code != 0);
  CHECK(one.err.find("need at least two sands") != std::string::npos);

  auto four = run_cli(concat({"plan"}, concat(four_sands(dir), {"--out", (dir / "four").string()})), dir / "run4");
  REQUIRE(four.exit_code == 0);
  auto p4 = plan_from_json_text(testing::slurp(dir / "four" / "plan.json"));
  const std::map<std::string, int> expected{{"a", 1}, {"b", 6}, {"c", 10}, {"d", 16}};
  CHECK(p4.anchor_slots == expected);
}

TEST_CASE("swatches are deterministic files") {
  auto dir = fresh_dir("swatches");
  auto a = put_png(dir, "g50.png", testing::constant_image(8, 8, 50));
  auto b = put_png(dir, "g200.png", testing::constant_image(8, 8, 200));
  REQUIRE(run_cli({"plan", a, b, "--out", (dir / "p").string()}, dir / "run").exit_code == 0);
  const auto plan_file = (dir / "p" / "plan.json").string();

  auto r1 = run_cli({"swatches", plan_file, "--size", "32x32", "--seed", "11", "--out", (dir / "s1").string()},
                    dir / "run1");
  auto r2 = run_cli({"swatches", plan_file, "--size", "32x32", "--seed", "11", "--out", (dir / "s2").string()},
                    dir / "run2");
  REQUIRE(r1.exit_code == 0);
  REQUIRE(r2.exit_code == 0);
  int pngs = 0;
  for (const auto& e : fs::directory_iterator(dir / "s1")) {
    if (e.path().extension() != ".png") continue;
    ++pngs;
    CHECK(testing::slurp(e.path()) == testing::slurp(dir / "s2" / e.path().filename()));
  }
  CHECK(pngs == 16);

  for (int slot : {1, 16}) {
    auto img = load_image(dir / "s1" / ("swatch_" + std::string(slot < 10 ? "0" : "") + std::to_string(slot) + ".png")).image;
    const std::uint8_t g = slot == 1 ? 50 : 200;
    for (const Rgb& p : img.pixels()) REQUIRE(p == Rgb{g, g, g});
  }

  fs::remove(dir / "p" / "sands" / "g50.png");
  auto broken = run_cli({"swatches", plan_file, "--out", (dir / "s3").string()}, dir / "run3");
  CHECK(broken.exit_code != 0);
  CHECK(broken.err.find("g50.png") != std::string::npos);
}

TEST_CASE("convert produces render, slot map and side by side") {
  auto dir = fresh_dir("convert");
  REQUIRE(run_cli(concat({"plan"}, concat(four_sands(dir), {"--out", (dir / "p").string()})), dir / "run").exit_code == 0);
  const auto plan_file = (dir / "p" / "plan.json").string();

  RgbImage gradient(64, 64);
  for (int y = 0; y < 64; ++y)
    for (int x = 0; x < 64; ++x) {
      const auto v = static_cast<std::uint8_t>(x * 4);
      gradient.at(x, y) = Rgb{v, v, v};
    }
  auto src = put_png(dir, "gradient.png", gradient);
  auto r = run_cli({"convert", src, plan_file, "--block", "8", "--side-by-side", "--size", "64x64", "--out",
                    (dir / "out").string()},
                   dir / "run1");
  REQUIRE(r.exit_code == 0);
  auto img = load_image(dir / "out" / "render.png").image;
  CHECK(img.width() == 512);
  CHECK(img.height() == 512);
  auto sbs = load_image(dir / "out" / "side_by_side.png").image;
  CHECK(sbs.width() == 512 + 8 + 512);
  CHECK(fs::exists(dir / "out" / "slot_map.json"));

  auto black = put_png(dir, "black.png", testing::constant_image(5, 4, 0));
  REQUIRE(run_cli({"convert", black, plan_file, "--size", "32x32", "--out", (dir / "black").string()}, dir / "run2")
              .exit_code == 0);
  auto map = nlohmann::json::parse(testing::slurp(dir / "black" / "slot_map.json"));
  CHECK(map["slots"].size() == 20);
  for (const auto& s : map["slots"]) CHECK(s == 1);

  auto clash = run_cli({"convert", black, plan_file, "--thresholds",
                        "16,32,48,64,80,96,112,128,144,160,176,192,208,224,224", "--out", (dir / "x").string()},
                       dir / "run3");
  CHECK(clash.exit_code != 0);
  CHECK(clash.err.find("threshold collision") != std::string::npos);

  auto short_list = run_cli({"convert", black, plan_file, "--thresholds", "16,32", "--out", (dir / "x").string()},
                            dir / "run4");
  CHECK(short_list.exit_code != 0);
  CHECK(short_list.err.find("size mismatch") != std::string::npos);
}

TEST_CASE("serve fails when the port is taken") {
  auto dir = fresh_dir("serve");
  Service blocker(dir / "blocker");
  REQUIRE(blocker.bind("127.0.0.1", 0));
  const int port = blocker.port();
  auto r = run_cli({"serve", "--host", "127.0.0.1", "--port", std::to_string(port), "--state", (dir / "state").string()},
                   dir / "run");
  CHECK(r.exit_code != 0);
  CHECK(r.err.find("cannot bind") != std::string::npos);
}

TEST_CASE("usage errors exit nonzero") {
  auto dir = fresh_dir("usage");
  CHECK(run_cli({}, dir / "none").exit_code != 0);
  CHECK(run_cli({"bogus"}, dir / "bogus").exit_code != 0);
  CHECK(run_cli({"--help"}, dir / "help").exit_code == 0);
}
