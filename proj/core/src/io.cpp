#include "lfd/io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <vector>

#include "lfd/error.hpp"

namespace fs = std::filesystem;

namespace lfd {

LayoutConfig LayoutConfig::from_kv(const KvSection& kv) {
  LayoutConfig cfg;
  cfg.n_t = kv.get_int("n_t", cfg.n_t);
  cfg.n_s = kv.get_int("n_s", cfg.n_s);
  cfg.name_template = kv.get_string("name_template", cfg.name_template);
  cfg.ground_truth = kv.get_string("ground_truth", cfg.ground_truth);
  cfg.require_square = kv.get_bool("require_square", cfg.require_square);
  cfg.disp_min = kv.get_double("disp_min", cfg.disp_min);
  cfg.disp_max = kv.get_double("disp_max", cfg.disp_max);
  if (cfg.n_t < 1 || cfg.n_s < 1) fail(Errc::BadConfig, "angular grid dimensions must be positive");
  if (!(cfg.disp_min < cfg.disp_max)) fail(Errc::BadConfig, "disp_min must be below disp_max");
  return cfg;
}

LayoutConfig LayoutConfig::for_directory(const fs::path& dir) {
  if (fs::exists(dir / kLayoutFileName)) return from_kv(load_kv(dir / kLayoutFileName).root);
  LayoutConfig cfg;
  if (fs::exists(dir / "parameters.cfg")) {
    // HCI files carry INI sections; the disparity range lives under [meta].
    const KvDocument doc = load_kv(dir / "parameters.cfg");
    for (const KvSection& sec : doc.sections) {
      cfg.disp_min = sec.get_double("disp_min", cfg.disp_min);
      cfg.disp_max = sec.get_double("disp_max", cfg.disp_max);
      cfg.n_t = sec.get_int("num_cams_y", cfg.n_t);
      cfg.n_s = sec.get_int("num_cams_x", cfg.n_s);
    }
  }
  return cfg;
}

void LayoutConfig::save(const fs::path& path) const {
  std::ofstream out(path);
  if (!out) fail(Errc::Io, "cannot write " + path.string());
  out << "# light field directory layout\n"
      << "n_t = " << n_t << "\n"
      << "n_s = " << n_s << "\n"
      << "name_template = " << name_template << "\n"
      << "ground_truth = " << ground_truth << "\n"
      << "require_square = " << (require_square ? "true" : "false") << "\n"
      << "disp_min = " << disp_min << "\n"
      << "disp_max = " << disp_max << "\n";
}

std::string view_file_name(const LayoutConfig& layout, int index) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), layout.name_template.c_str(), index);
  return buf;
}

LightField4D load_lightfield(const fs::path& dir, const LayoutConfig& layout) {
  if (layout.require_square && layout.n_t != layout.n_s) {
    fail(Errc::NonSquareGrid, std::to_string(layout.n_t) + "x" + std::to_string(layout.n_s) + " angular grid");
  }
  const int count = layout.n_t * layout.n_s;
  for (int i = 0; i < count; ++i) {
    if (!fs::exists(dir / view_file_name(layout, i))) {
      fail(Errc::MissingView, "view " + std::to_string(i) + " (" + view_file_name(layout, i) + ")");
    }
  }
  LightField4D lf;
  for (int i = 0; i < count; ++i) {
    const Image img = load_png(dir / view_file_name(layout, i));
    if (i == 0) {
      lf = LightField4D(layout.n_t, layout.n_s, img.height, img.width, img.channels);
    } else if (img.height != lf.height() || img.width != lf.width() || img.channels != lf.channels()) {
      fail(Errc::InconsistentDimensions, "view " + std::to_string(i) + " differs in size or channel count");
    }
    lf.set_view(i / layout.n_s, i % layout.n_s, img);
  }
  return lf;
}

void save_lightfield(const fs::path& dir, const LightField4D& lf, const LayoutConfig& layout) {
  fs::create_directories(dir);
  LayoutConfig out = layout;
  out.n_t = lf.n_t();
  out.n_s = lf.n_s();
  for (int t = 0; t < lf.n_t(); ++t) {
    for (int s = 0; s < lf.n_s(); ++s) save_png(dir / view_file_name(out, t * lf.n_s() + s), lf.view(t, s));
  }
  out.save(dir / kLayoutFileName);
}

namespace {

struct PngImage {
  png_image img{};
  PngImage() {
    std::memset(&img, 0, sizeof(img));
    img.version = PNG_IMAGE_VERSION;
  }
  ~PngImage() { png_image_free(&img); }
  PngImage(const PngImage&) = delete;
  PngImage& operator=(const PngImage&) = delete;
};

} // namespace

Image load_png(const fs::path& path) {
  PngImage png;
  if (!png_image_begin_read_from_file(&png.img, path.c_str())) {
    fail(Errc::Io, "cannot read PNG " + path.string() + ": " + png.img.message);
  }
  const bool color = (png.img.format & PNG_FORMAT_FLAG_COLOR) != 0;
  png.img.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  const int channels = color ? 3 : 1;
  std::vector<png_byte> buffer(PNG_IMAGE_SIZE(png.img));
  if (!png_image_finish_read(&png.img, nullptr, buffer.data(), 0, nullptr)) {
    fail(Errc::Io, "cannot decode PNG " + path.string() + ": " + png.img.message);
  }
  Image out(static_cast<int>(png.img.height), static_cast<int>(png.img.width), channels);
  for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] = static_cast<float>(buffer[i]) / 255.0f;
  return out;
}

void save_png(const fs::path& path, const Image& img) {
  if (img.channels != 1 && img.channels != 3) fail(Errc::PreconditionViolated, "PNG output needs 1 or 3 channels");
  PngImage png;
  png.img.width = static_cast<png_uint_32>(img.width);
  png.img.height = static_cast<png_uint_32>(img.height);
  png.img.format = img.channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  std::vector<png_byte> buffer(img.data.size());
  for (std::size_t i = 0; i < buffer.size(); ++i) {
    const float v = std::clamp(img.data[i], 0.0f, 1.0f);
    buffer[i] = static_cast<png_byte>(std::lround(v * 255.0f));
  }
  if (!png_image_write_to_file(&png.img, path.c_str(), 0, buffer.data(), 0, nullptr)) {
    fail(Errc::Io, "cannot write PNG " + path.string() + ": " + png.img.message);
  }
}

void save_png16(const fs::path& path, const Array2D<double>& values, double lo, double hi) {
  PngImage png;
  png.img.width = static_cast<png_uint_32>(values.width());
  png.img.height = static_cast<png_uint_32>(values.height());
  png.img.format = PNG_FORMAT_LINEAR_Y;
  const double range = hi > lo ? hi - lo : 1.0;
  std::vector<png_uint_16> buffer(values.size());
  for (std::size_t i = 0; i < buffer.size(); ++i) {
    const double v = std::isfinite(values.data()[i]) ? (values.data()[i] - lo) / range : 0.0;
    buffer[i] = static_cast<png_uint_16>(std::lround(std::clamp(v, 0.0, 1.0) * 65535.0));
  }
  if (!png_image_write_to_file(&png.img, path.c_str(), 0, buffer.data(), 0, nullptr)) {
    fail(Errc::Io, "cannot write PNG " + path.string() + ": " + png.img.message);
  }
}

Array2D<std::uint8_t> load_mask_png(const fs::path& path) {
  const Image img = load_png(path);
  Array2D<std::uint8_t> mask(img.height, img.width, 0);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) mask(y, x) = img.at(y, x, 0) > 0.5f ? 1 : 0;
  }
  return mask;
}

void save_mask_png(const fs::path& path, const Array2D<std::uint8_t>& mask) {
  Image img(mask.height(), mask.width(), 1);
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) img.at(y, x, 0) = mask(y, x) ? 1.0f : 0.0f;
  }
  save_png(path, img);
}

Array2D<float> load_pfm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::Io, "cannot open PFM " + path.string());
  const std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
  };
  auto token = [&] {
    skip_ws();
    std::string tok;
    while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) tok.push_back(bytes[pos++]);
    return tok;
  };

  const std::string magic = token();
  if (magic == "PF") fail(Errc::UnsupportedPfmVariant, "color PFM given to grayscale loader: " + path.string());
  if (magic != "Pf") fail(Errc::BadMagic, "'" + magic + "' in " + path.string());

  int width = 0, height = 0;
  double scale = 0.0;
  try {
    width = std::stoi(token());
    height = std::stoi(token());
    scale = std::stod(token());
  } catch (const std::exception&) {
    fail(Errc::TruncatedPayload, "malformed PFM header in " + path.string());
  }
  if (width <= 0 || height <= 0 || scale == 0.0) fail(Errc::BadMagic, "invalid PFM header in " + path.string());
  ++pos; // single whitespace byte terminates the header

  const std::size_t count = static_cast<std::size_t>(width) * height;
  if (pos > bytes.size() || bytes.size() - pos < count * sizeof(float)) {
    fail(Errc::TruncatedPayload, path.string() + " holds fewer than " + std::to_string(count) + " floats");
  }
  const bool file_little = scale < 0.0;
  const bool host_little = std::endian::native == std::endian::little;

  Array2D<float> out(height, width);
  for (int row = 0; row < height; ++row) {
    const int y = height - 1 - row;
    for (int x = 0; x < width; ++x) {
      std::uint32_t bits = 0;
      std::memcpy(&bits, bytes.data() + pos + (static_cast<std::size_t>(row) * width + x) * 4, 4);
      if (file_little != host_little) bits = __builtin_bswap32(bits);
      out(y, x) = std::bit_cast<float>(bits);
    }
  }
  return out;
}

void save_pfm(const fs::path& path, const Array2D<float>& values) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::Io, "cannot write PFM " + path.string());
  const bool host_little = std::endian::native == std::endian::little;
  out << "Pf\n" << values.width() << " " << values.height() << "\n" << (host_little ? "-1.0" : "1.0") << "\n";
  for (int y = values.height() - 1; y >= 0; --y) {
    out.write(reinterpret_cast<const char*>(values.row(y).data()), static_cast<std::streamsize>(values.width() * sizeof(float)));
  }
  if (!out) fail(Errc::Io, "short write to " + path.string());
}

Array2D<float> to_float(const Array2D<double>& values) {
  Array2D<float> out(values.height(), values.width());
  std::transform(values.data().begin(), values.data().end(), out.data().begin(),
                 [](double v) { return static_cast<float>(v); });
  return out;
}

Array2D<double> to_double(const Array2D<float>& values) {
  Array2D<double> out(values.height(), values.width());
  std::transform(values.data().begin(), values.data().end(), out.data().begin(),
                 [](float v) { return static_cast<double>(v); });
  return out;
}

} // namespace lfd
