// sandtone: sand mixture planning and sand-based image rendering.

#include "sandtone/commands.hpp"
#include "sandtone/error.hpp"
#include "sandtone/parallel.hpp"
#include "sandtone/workspace.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace fs = std::filesystem;
using namespace sandtone;

int main(int argc, char** argv) {
  CLI::App app{"sandtone - sand mixture sets and sand-based images from photographs"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads for per-pixel passes (0 = all cores)");

  std::vector<fs::path> analyze_images;
  auto* analyze = app.add_subcommand("analyze", "Report mean gray values, darkest to lightest");
  analyze->add_option("images", analyze_images, "Sand photographs (PNG/JPEG)")->required();

  cli::PlanOptions plan_opts;
  auto* plan = app.add_subcommand("plan", "Build a mixture plan and recipe");
  plan->add_option("images", plan_opts.images, "Sand photographs (PNG/JPEG)")->required();
  plan->add_option("--set-size,-n", plan_opts.set_size, "Number of mixtures in the set")->capture_default_str();
  plan->add_option("--out,-o", plan_opts.out_dir, "Output directory")->capture_default_str();

  cli::SwatchOptions swatch_opts;
  std::string swatch_size = "256x256";
  auto* swatches = app.add_subcommand("swatches", "Synthesize one preview image per mixture");
  swatches->add_option("plan", swatch_opts.plan_file, "plan.json")->required();
  swatches->add_option("--size", swatch_size, "Swatch size WxH")->capture_default_str();
  swatches->add_option("--seed", swatch_opts.params.seed, "Random seed")->capture_default_str();
  swatches->add_option("--out,-o", swatch_opts.out_dir, "Output directory (default: next to plan.json)");

  cli::ConvertOptions convert_opts;
  std::string convert_size = "256x256";
  std::string thresholds;
  auto* convert = app.add_subcommand("convert", "Render a picture as a sand-based image");
  convert->add_option("source", convert_opts.source, "Source picture (PNG/JPEG)")->required();
  convert->add_option("plan", convert_opts.plan_file, "plan.json")->required();
  convert->add_option("--block,-b", convert_opts.block_size, "Output pixels per source pixel side")->capture_default_str();
  convert->add_option("--seed", convert_opts.seed, "Random seed")->capture_default_str();
  convert->add_option("--thresholds", thresholds, "Interior range boundaries t1,...,t(N-1)");
  convert->add_flag("--side-by-side", convert_opts.side_by_side, "Also write source|render composite");
  convert->add_option("--size", convert_size, "Mixture texture size WxH")->capture_default_str();
  convert->add_option("--out,-o", convert_opts.out_dir, "Output directory")->capture_default_str();

  int port = 8080;
  std::string host = "127.0.0.1";
  fs::path state_dir = "sandtone-state";
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--port,-p", port, "Listen port")->capture_default_str();
  serve->add_option("--host", host, "Listen address")->capture_default_str();
  serve->add_option("--state", state_dir, "State directory")->capture_default_str();

  CLI11_PARSE(app, argc, argv);
  set_thread_count(threads);

  try {
    if (*analyze) return cli::analyze(analyze_images, std::cout, std::cerr);
    if (*plan) return cli::plan(plan_opts, std::cout, std::cerr);
    if (*swatches) {
      swatch_opts.params = parse_size(swatch_size, swatch_opts.params);
      return cli::swatches(swatch_opts, std::cout, std::cerr);
    }
    if (*convert) {
      convert_opts.swatch_params = parse_size(convert_size);
      if (!thresholds.empty()) convert_opts.thresholds = thresholds;
      return cli::convert(convert_opts, std::cout, std::cerr);
    }
    if (*serve) return cli::serve(host, port, state_dir, std::cout, std::cerr);
  } catch (const Error& e) {
    std::cerr << "sandtone: " << e.what() << "\n";
    return cli::kExitFailure;
  }
  return cli::kExitFailure;
}
