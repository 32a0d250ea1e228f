#include "sandtone/image_io.hpp"

#include "sandtone/error.hpp"

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>

#include <jpeglib.h>
#include <png.h>

namespace sandtone {

namespace {

bool is_png(std::span<const std::uint8_t> bytes) {
  static constexpr std::uint8_t kSig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  return bytes.size() >= 8 && std::memcmp(bytes.data(), kSig, 8) == 0;
}

bool is_jpeg(std::span<const std::uint8_t> bytes) {
  return bytes.size() >= 3 && bytes[0] == 0xff && bytes[1] == 0xd8 && bytes[2] == 0xff;
}

DecodedImage decode_png(std::span<const std::uint8_t> bytes) {
  png_image png;
  std::memset(&png, 0, sizeof png);
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&png, bytes.data(), bytes.size())) {
    throw Error(ErrorKind::Unsupported, std::string("corrupt PNG: ") + png.message);
  }
  const bool had_alpha = (png.format & PNG_FORMAT_FLAG_ALPHA) != 0;

  // Read as RGBA and drop alpha ourselves: asking libpng for RGB would
  // composite over a background instead of discarding.
  png.format = PNG_FORMAT_RGBA;
  std::vector<std::uint8_t> raw(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, raw.data(), 0, nullptr)) {
    std::string msg = png.message;
    png_image_free(&png);
    throw Error(ErrorKind::Unsupported, "corrupt PNG: " + msg);
  }

  const int w = static_cast<int>(png.width);
  const int h = static_cast<int>(png.height);
  std::vector<Rgb> px(static_cast<std::size_t>(w) * h);
  for (std::size_t i = 0; i < px.size(); ++i) px[i] = {raw[4 * i], raw[4 * i + 1], raw[4 * i + 2]};
  return {RgbImage(w, h, std::move(px)), had_alpha};
}

struct JpegErrorManager {
  jpeg_error_mgr base;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

void jpeg_silent(j_common_ptr) {}

DecodedImage decode_jpeg(std::span<const std::uint8_t> bytes) {
  jpeg_decompress_struct cinfo;
  JpegErrorManager err;
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = jpeg_error_exit;
  err.base.output_message = jpeg_silent;
  err.message[0] = '\0';

  // Everything touched after setjmp lives outside this frame or is POD.
  std::vector<Rgb> px;
  std::vector<JSAMPLE> row;
  int w = 0;
  int h = 0;
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    throw Error(ErrorKind::Unsupported, std::string("corrupt JPEG: ") + err.message);
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);

  w = static_cast<int>(cinfo.output_width);
  h = static_cast<int>(cinfo.output_height);
  px.resize(static_cast<std::size_t>(w) * h);
  row.resize(static_cast<std::size_t>(w) * 3);
  while (cinfo.output_scanline < cinfo.output_height) {
    const auto y = cinfo.output_scanline;
    JSAMPROW rows[1] = {row.data()};
    jpeg_read_scanlines(&cinfo, rows, 1);
    for (int x = 0; x < w; ++x)
      px[static_cast<std::size_t>(y) * w + x] = {row[3 * x], row[3 * x + 1], row[3 * x + 2]};
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return {RgbImage(w, h, std::move(px)), false};
}

std::vector<std::uint8_t> encode(const void* data, int width, int height, png_uint_32 format) {
  if (width <= 0 || height <= 0) fail("cannot encode an empty image");
  png_image png;
  std::memset(&png, 0, sizeof png);
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(width);
  png.height = static_cast<png_uint_32>(height);
  png.format = format;

  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&png, nullptr, &size, 0, data, 0, nullptr)) {
    throw Error(ErrorKind::Io, std::string("PNG encode failed: ") + png.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&png, out.data(), &size, 0, data, 0, nullptr)) {
    throw Error(ErrorKind::Io, std::string("PNG encode failed: ") + png.message);
  }
  out.resize(size);
  return out;
}

}  // namespace

DecodedImage decode_image(std::span<const std::uint8_t> bytes) {
  if (is_png(bytes)) return decode_png(bytes);
  if (is_jpeg(bytes)) return decode_jpeg(bytes);
  throw Error(ErrorKind::Unsupported, "unsupported image format (expected PNG or JPEG)");
}

DecodedImage load_image(const std::filesystem::path& path) {
  std::vector<std::uint8_t> bytes = read_file(path);
  try {
    return decode_image(bytes);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

std::vector<std::uint8_t> encode_png(const RgbImage& img) {
  static_assert(sizeof(Rgb) == 3);
  return encode(img.pixels().data(), img.width(), img.height(), PNG_FORMAT_RGB);
}

std::vector<std::uint8_t> encode_png(const GrayImage& img) {
  return encode(img.pixels().data(), img.width(), img.height(), PNG_FORMAT_GRAY);
}

void write_png(const std::filesystem::path& path, const RgbImage& img) {
  write_file(path, encode_png(img));
}

void write_png(const std::filesystem::path& path, const GrayImage& img) {
  write_file(path, encode_png(img));
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in || std::filesystem::is_directory(path)) {
    throw Error(ErrorKind::NotFound, "cannot read " + path.string());
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  write_file(path, std::span<const std::uint8_t>(
                       reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

}  // namespace sandtone
