#pragma once

// PNG/JPEG decoding and 8-bit PNG encoding.

#include "sandtone/image.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace sandtone {

struct DecodedImage {
  RgbImage image;
  bool alpha_discarded = false;  // the source carried an alpha channel
};

/// Sniffs the signature; accepts PNG and JPEG only.
/// Throws Error(Unsupported) for anything else or for corrupt data.
DecodedImage decode_image(std::span<const std::uint8_t> bytes);

/// Throws Error(NotFound, "cannot read <path>") if the file cannot be opened.
DecodedImage load_image(const std::filesystem::path& path);

std::vector<std::uint8_t> encode_png(const RgbImage& img);
std::vector<std::uint8_t> encode_png(const GrayImage& img);

void write_png(const std::filesystem::path& path, const RgbImage& img);
void write_png(const std::filesystem::path& path, const GrayImage& img);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace sandtone
