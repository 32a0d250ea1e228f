#include "sandtone/commands.hpp"

#include "sandtone/converter.hpp"
#include "sandtone/error.hpp"
#include "sandtone/image_io.hpp"
#include "sandtone/service.hpp"
#include "sandtone/workspace.hpp"

#include <cstdio>
#include <csignal>
#include <ostream>
#include <set>

namespace sandtone::cli {

namespace fs = std::filesystem;

namespace {

int report(const Error& e, std::ostream& err) {
  err << "sandtone: " << e.what() << "\n";
  switch (e.kind()) {
    case ErrorKind::NotFound:
    case ErrorKind::Unsupported:
    case ErrorKind::TooLarge:
      return kExitBadInput;
    default:
      return kExitFailure;
  }
}

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const Error& e) {
    return report(e, err);
  } catch (const std::exception& e) {
    err << "sandtone: " << e.what() << "\n";
    return kExitFailure;
  }
}

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

int analyze(const std::vector<fs::path>& images, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (images.empty()) fail("no images given");
    std::vector<SandSample> samples;
    for (const fs::path& p : images) {
      DecodedImage d = load_image(p);
      if (d.alpha_discarded) err << "warning: " << p.string() << ": alpha channel discarded\n";
      const double mean = mean_gray_rgb(d.image).mean;
      out << p.string() << "\tmean gray " << fixed2(mean) << "\t(" << d.image.width() << "x"
          << d.image.height() << ")\n";
      SandSample s;
      s.id = std::to_string(samples.size());
      s.name = p.string();
      s.mean_gray = mean;
      samples.push_back(std::move(s));
    }
    if (samples.size() >= 2) {
      samples = sort_sands(std::move(samples));
      out << "darkest to lightest:\n";
      for (std::size_t i = 0; i < samples.size(); ++i) {
        const std::string label = i < 26 ? std::string(1, static_cast<char>('A' + i)) : std::to_string(i + 1);
        out << "  " << label << "  " << samples[i].name << "  " << fixed2(samples[i].mean_gray) << "\n";
      }
    }
    return kExitOk;
  });
}

int plan(const PlanOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::vector<SandSample> samples;
    std::set<std::string> ids;
    for (const fs::path& p : opts.images) {
      ImportedSand imported = import_sand(read_file(p), p.filename().string(), ids);
      if (imported.alpha_discarded) err << "warning: " << p.string() << ": alpha channel discarded\n";
      ids.insert(imported.sample.id);
      samples.push_back(std::move(imported.sample));
    }
    MixturePlan result = build_plan(std::move(samples), opts.set_size);

    fs::create_directories(opts.out_dir);
    for (const SandSample& s : result.sands) store_sand(opts.out_dir, s);
    write_file(opts.out_dir / "plan.json", plan_to_json_text(result));
    write_file(opts.out_dir / "recipe.csv", plan_to_csv(result));
    out << plan_to_recipe(result);
    out << "wrote " << (opts.out_dir / "plan.json").string() << " and "
        << (opts.out_dir / "recipe.csv").string() << "\n";
    return kExitOk;
  });
}

int swatches(const SwatchOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const MixturePlan p = load_plan_with_images(opts.plan_file);
    fs::path dir = opts.out_dir.empty() ? opts.plan_file.parent_path() : opts.out_dir;
    if (dir.empty()) dir = ".";
    fs::create_directories(dir);
    for (const MixtureTexture& tex : synthesize_plan_swatches(p, opts.params)) {
      const std::string stem = swatch_file_stem(tex.mixture_slot);
      write_png(dir / (stem + ".png"), tex.image);
      write_file(dir / (stem + ".json"), swatch_sidecar_json(tex));
    }
    out << "wrote " << p.mixtures.size() << " swatches to " << dir.string() << "\n";
    return kExitOk;
  });
}

int convert(const ConvertOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    RenderJob job;
    DecodedImage src = load_image(opts.source);
    if (src.alpha_discarded) err << "warning: " << opts.source.string() << ": alpha channel discarded\n";
    job.source = std::move(src.image);
    job.plan = load_plan_with_images(opts.plan_file);
    job.table = opts.thresholds ? parse_thresholds(*opts.thresholds, job.plan.set_size)
                                : default_table(job.plan.set_size);
    job.block_size = opts.block_size;
    job.seed = opts.seed;
    job.swatch_params = opts.swatch_params;

    SandRender result = render(job);
    fs::create_directories(opts.out_dir);
    write_png(opts.out_dir / "render.png", result.image);
    write_file(opts.out_dir / "slot_map.json", slot_map_to_json_text(result.slot_map, job.block_size));
    if (opts.side_by_side) {
      write_png(opts.out_dir / "side_by_side.png", compose_side_by_side(job.source, result.image));
    }
    out << "rendered " << result.image.width() << "x" << result.image.height() << " to "
        << (opts.out_dir / "render.png").string() << "\n";
    return kExitOk;
  });
}

namespace {
Service* g_running = nullptr;
extern "C" void on_signal(int) {
  if (g_running) g_running->stop();
}
}  // namespace

int serve(const std::string& host, int port, const fs::path& state_dir, std::ostream& out,
          std::ostream& err) {
  return guarded(err, [&] {
    Service service(state_dir);
    if (!service.bind(host, port)) {
      err << "sandtone: cannot bind " << host << ":" << port << "\n";
      return kExitFailure;
    }
    out << "listening on http://" << host << ":" << service.port() << " (state: " << state_dir.string()
        << ")" << std::endl;
    g_running = &service;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    service.listen();
    g_running = nullptr;
    return kExitOk;
  });
}

}  // namespace sandtone::cli
