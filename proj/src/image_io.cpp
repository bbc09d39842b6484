#include "csoigo/error.hpp"
#include "csoigo/image.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

namespace csoigo {

GrayImage::GrayImage(Eigen::Index rows, Eigen::Index cols, double fill)
    : pixels_(Eigen::MatrixXd::Constant(rows, cols, fill)) {
  if (rows <= 0 || cols <= 0) throw InvalidArgument("image dimensions must be positive");
}

GrayImage::GrayImage(Eigen::MatrixXd pixels) : pixels_(std::move(pixels)) {
  if (pixels_.rows() <= 0 || pixels_.cols() <= 0) throw DataError("zero-sized image");
  if (!pixels_.allFinite()) throw DataError("image contains non-finite pixels");
}

bool GrayImage::operator==(const GrayImage& other) const {
  return rows() == other.rows() && cols() == other.cols() && pixels_ == other.pixels_;
}

namespace {

std::vector<unsigned char> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open image '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

double luma(double r, double g, double b) { return 0.299 * r + 0.587 * g + 0.114 * b; }

// Netpbm header token, skipping whitespace and '#' comments.
bool next_token(const std::vector<unsigned char>& buf, std::size_t& pos, std::string& token) {
  token.clear();
  while (pos < buf.size()) {
    if (buf[pos] == '#') {
      while (pos < buf.size() && buf[pos] != '\n') ++pos;
    } else if (std::isspace(buf[pos])) {
      ++pos;
    } else {
      break;
    }
  }
  while (pos < buf.size() && !std::isspace(buf[pos]) && buf[pos] != '#') token.push_back(static_cast<char>(buf[pos++]));
  return !token.empty();
}

GrayImage decode_pgm(const std::vector<unsigned char>& buf, const std::filesystem::path& path) {
  std::size_t pos = 2;
  std::array<long, 3> header{};
  std::string token;
  for (long& value : header) {
    if (!next_token(buf, pos, token)) throw DataError("truncated PGM header in '" + path.string() + "'");
    try {
      value = std::stol(token);
    } catch (const std::exception&) {
      throw DataError("malformed PGM header in '" + path.string() + "'");
    }
  }
  const auto [width, height, maxval] = header;
  if (width <= 0 || height <= 0) throw DataError("zero-sized image '" + path.string() + "'");
  if (maxval <= 0 || maxval > 255) throw DataError("unsupported PGM maxval in '" + path.string() + "' (8-bit only)");
  ++pos;  // single whitespace byte ends the header
  const auto count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (buf.size() < pos + count) throw DataError("truncated PGM data in '" + path.string() + "'");

  Eigen::MatrixXd pixels(height, width);
  for (long y = 0; y < height; ++y)
    for (long x = 0; x < width; ++x)
      pixels(y, x) = buf[pos + static_cast<std::size_t>(y * width + x)];
  return GrayImage(std::move(pixels));
}

GrayImage decode_png(const std::vector<unsigned char>& buf, const std::filesystem::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, buf.data(), buf.size()))
    throw DataError("cannot decode PNG '" + path.string() + "': " + image.message);

  if (image.format & PNG_FORMAT_FLAG_LINEAR) {
    png_image_free(&image);
    throw DataError("unsupported PNG bit depth in '" + path.string() + "' (8-bit only)");
  }
  if (image.width == 0 || image.height == 0) {
    png_image_free(&image);
    throw DataError("zero-sized image '" + path.string() + "'");
  }

  // Keep the alpha channel in the requested layout so libpng never
  // composites; alpha is ignored afterwards.
  const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  const bool alpha = (image.format & PNG_FORMAT_FLAG_ALPHA) != 0;
  image.format = color ? (alpha ? PNG_FORMAT_RGBA : PNG_FORMAT_RGB)
                       : (alpha ? PNG_FORMAT_GA : PNG_FORMAT_GRAY);
  const std::size_t channels = PNG_IMAGE_PIXEL_CHANNELS(image.format);
  std::vector<unsigned char> raw(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, raw.data(), 0, nullptr)) {
    const std::string message = image.message;
    png_image_free(&image);
    throw DataError("cannot decode PNG '" + path.string() + "': " + message);
  }

  const auto height = static_cast<Eigen::Index>(image.height);
  const auto width = static_cast<Eigen::Index>(image.width);
  Eigen::MatrixXd pixels(height, width);
  for (Eigen::Index y = 0; y < height; ++y) {
    for (Eigen::Index x = 0; x < width; ++x) {
      const unsigned char* p = raw.data() + (static_cast<std::size_t>(y * width + x)) * channels;
      pixels(y, x) = color ? luma(p[0], p[1], p[2]) : static_cast<double>(p[0]);
    }
  }
  return GrayImage(std::move(pixels));
}

std::vector<unsigned char> to_bytes(const GrayImage& img) {
  std::vector<unsigned char> out(static_cast<std::size_t>(img.size()));
  for (Eigen::Index y = 0; y < img.rows(); ++y)
    for (Eigen::Index x = 0; x < img.cols(); ++x)
      out[static_cast<std::size_t>(y * img.cols() + x)] =
          static_cast<unsigned char>(std::lround(std::clamp(img(y, x), 0.0, 255.0)));
  return out;
}

}  // namespace

GrayImage load_image(const std::filesystem::path& path) {
  const auto buf = read_bytes(path);
  if (buf.size() >= 8 && png_sig_cmp(buf.data(), 0, 8) == 0) return decode_png(buf, path);
  if (buf.size() >= 2 && buf[0] == 'P' && buf[1] == '5') return decode_pgm(buf, path);
  throw DataError("cannot decode image '" + path.string() + "' (expected PNG or binary PGM)");
}

void save_pgm(const GrayImage& img, const std::filesystem::path& path) {
  if (img.empty()) throw InvalidArgument("cannot save an empty image");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << "P5\n" << img.cols() << ' ' << img.rows() << "\n255\n";
  const auto bytes = to_bytes(img);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

void save_png(const GrayImage& img, const std::filesystem::path& path) {
  if (img.empty()) throw InvalidArgument("cannot save an empty image");
  const auto bytes = to_bytes(img);
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.cols());
  image.height = static_cast<png_uint_32>(img.rows());
  image.format = PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&image, path.c_str(), 0, bytes.data(), 0, nullptr))
    throw DataError("cannot write PNG '" + path.string() + "': " + image.message);
}

void save_image(const GrayImage& img, const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".png")
    save_png(img, path);
  else
    save_pgm(img, path);
}

}  // namespace csoigo
