#pragma once

#include <png.h>

#include <array>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace uavsem {

class ImageIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Planar RGB image, samples in [-1, 1]. 8-bit files map linearly:
// v/255 * 2 - 1 on load, the exact inverse (rounded) on save.
struct ImageBuffer {
  int width = 0;
  int height = 0;
  std::array<std::vector<double>, 3> ch;

  static ImageBuffer zeros(int width, int height) {
    ImageBuffer img;
    img.width = width;
    img.height = height;
    for (auto& c : img.ch)
      c.assign(static_cast<std::size_t>(width) * height, 0.0);
    return img;
  }

  double& at(int c, int y, int x) {
    return ch[c][static_cast<std::size_t>(y) * width + x];
  }
  double at(int c, int y, int x) const {
    return ch[c][static_cast<std::size_t>(y) * width + x];
  }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width) * height;
  }
};

namespace detail {

inline double byte_to_sample(std::uint8_t v) { return v / 255.0 * 2.0 - 1.0; }

inline std::uint8_t sample_to_byte(double s) {
  double v = (s + 1.0) / 2.0 * 255.0;
  if (v < 0.0) v = 0.0;
  if (v > 255.0) v = 255.0;
  return static_cast<std::uint8_t>(v + 0.5);
}

}  // namespace detail

// Binary PPM (P6, maxval 255).
inline ImageBuffer load_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ImageIoError("cannot open " + path.string());
  std::string magic;
  in >> magic;
  if (magic != "P6") throw ImageIoError(path.string() + ": not a binary PPM");
  auto next_token = [&in, &path]() {
    // Skips whitespace and '#' comment lines between header fields.
    std::string tok;
    while (true) {
      if (!(in >> tok)) throw ImageIoError(path.string() + ": truncated PPM header");
      if (tok[0] == '#') {
        std::string rest;
        std::getline(in, rest);
        continue;
      }
      return tok;
    }
  };
  const int width = std::stoi(next_token());
  const int height = std::stoi(next_token());
  const int maxval = std::stoi(next_token());
  if (width <= 0 || height <= 0) throw ImageIoError(path.string() + ": bad dimensions");
  if (maxval != 255) throw ImageIoError(path.string() + ": only maxval 255 supported");
  in.get();  // single whitespace byte after maxval

  std::vector<std::uint8_t> raw(static_cast<std::size_t>(width) * height * 3);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size())
    throw ImageIoError(path.string() + ": truncated PPM payload");

  ImageBuffer img = ImageBuffer::zeros(width, height);
  for (std::size_t i = 0; i < img.pixel_count(); ++i)
    for (int c = 0; c < 3; ++c)
      img.ch[c][i] = detail::byte_to_sample(raw[i * 3 + c]);
  return img;
}

inline void save_ppm(const ImageBuffer& img, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ImageIoError("cannot write " + path.string());
  out << "P6\n" << img.width << " " << img.height << "\n255\n";
  std::vector<std::uint8_t> raw(img.pixel_count() * 3);
  for (std::size_t i = 0; i < img.pixel_count(); ++i)
    for (int c = 0; c < 3; ++c)
      raw[i * 3 + c] = detail::sample_to_byte(img.ch[c][i]);
  out.write(reinterpret_cast<const char*>(raw.data()),
            static_cast<std::streamsize>(raw.size()));
}

// 8-bit PNG via libpng; alpha is dropped, gray is expanded to RGB.
inline ImageBuffer load_png(const std::filesystem::path& path) {
  std::FILE* fp = std::fopen(path.string().c_str(), "rb");
  if (!fp) throw ImageIoError("cannot open " + path.string());
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    if (png) png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    throw ImageIoError("libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    throw ImageIoError(path.string() + ": PNG decode failed");
  }
  png_init_io(png, fp);
  png_read_info(png, info);

  png_set_expand(png);
  png_set_strip_16(png);
  png_set_strip_alpha(png);
  png_set_gray_to_rgb(png);
  png_read_update_info(png, info);

  const int width = static_cast<int>(png_get_image_width(png, info));
  const int height = static_cast<int>(png_get_image_height(png, info));
  std::vector<std::uint8_t> raw(static_cast<std::size_t>(width) * height * 3);
  std::vector<png_bytep> rows(height);
  for (int y = 0; y < height; ++y)
    rows[y] = raw.data() + static_cast<std::size_t>(y) * width * 3;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  std::fclose(fp);

  ImageBuffer img = ImageBuffer::zeros(width, height);
  for (std::size_t i = 0; i < img.pixel_count(); ++i)
    for (int c = 0; c < 3; ++c)
      img.ch[c][i] = detail::byte_to_sample(raw[i * 3 + c]);
  return img;
}

inline void save_png(const ImageBuffer& img, const std::filesystem::path& path) {
  std::FILE* fp = std::fopen(path.string().c_str(), "wb");
  if (!fp) throw ImageIoError("cannot write " + path.string());
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    if (png) png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    throw ImageIoError("libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    throw ImageIoError(path.string() + ": PNG encode failed");
  }
  png_init_io(png, fp);
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.width),
               static_cast<png_uint_32>(img.height), 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);

  std::vector<std::uint8_t> raw(img.pixel_count() * 3);
  for (std::size_t i = 0; i < img.pixel_count(); ++i)
    for (int c = 0; c < 3; ++c)
      raw[i * 3 + c] = detail::sample_to_byte(img.ch[c][i]);
  std::vector<png_bytep> rows(img.height);
  for (int y = 0; y < img.height; ++y)
    rows[y] = raw.data() + static_cast<std::size_t>(y) * img.width * 3;
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
}

// Dispatch by magic bytes: PNG signature or "P6".
inline ImageBuffer load_image(const std::filesystem::path& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw ImageIoError("cannot open " + path.string());
  unsigned char sig[2] = {0, 0};
  probe.read(reinterpret_cast<char*>(sig), 2);
  probe.close();
  if (sig[0] == 0x89 && sig[1] == 'P') return load_png(path);
  if (sig[0] == 'P' && sig[1] == '6') return load_ppm(path);
  throw ImageIoError(path.string() + ": unsupported image format");
}

}  // namespace uavsem
