#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "lfd/array2d.hpp"
#include "lfd/kv_config.hpp"
#include "lfd/light_field.hpp"

namespace lfd {

/// Directory layout of a sub-aperture view grid. Defaults follow the HCI 4D
/// benchmark (`input_Cam000.png` ... row-major over (t, s), `gt_disp_lowres.pfm`).
struct LayoutConfig {
  int n_t = 9;
  int n_s = 9;
  std::string name_template = "input_Cam%03d.png";
  std::string ground_truth = "gt_disp_lowres.pfm";
  bool require_square = false;
  double disp_min = -2.5;
  double disp_max = 2.5;

  static LayoutConfig from_kv(const KvSection& kv);
  /// Reads `<dir>/lightfield.cfg` when present, otherwise picks up `disp_min`
  /// / `disp_max` from an HCI `parameters.cfg`, otherwise defaults.
  static LayoutConfig for_directory(const std::filesystem::path& dir);
  void save(const std::filesystem::path& path) const;
};

inline constexpr const char* kLayoutFileName = "lightfield.cfg";

std::string view_file_name(const LayoutConfig& layout, int index);

LightField4D load_lightfield(const std::filesystem::path& dir, const LayoutConfig& layout);
/// Writes every view as an 8-bit PNG plus the layout file.
void save_lightfield(const std::filesystem::path& dir, const LightField4D& lf, const LayoutConfig& layout);

/// 8-bit PNG, gray or RGB (alpha dropped, palettes expanded), scaled by 1/255.
Image load_png(const std::filesystem::path& path);
void save_png(const std::filesystem::path& path, const Image& img);
/// 16-bit grayscale preview of `values` linearly mapped from [lo, hi].
void save_png16(const std::filesystem::path& path, const Array2D<double>& values, double lo, double hi);

Array2D<std::uint8_t> load_mask_png(const std::filesystem::path& path);
void save_mask_png(const std::filesystem::path& path, const Array2D<std::uint8_t>& mask);

/// Grayscale PFM ("Pf"). The scale sign selects endianness (negative =
/// little-endian); rows are stored bottom-up.
Array2D<float> load_pfm(const std::filesystem::path& path);
void save_pfm(const std::filesystem::path& path, const Array2D<float>& values);

Array2D<float> to_float(const Array2D<double>& values);
Array2D<double> to_double(const Array2D<float>& values);

} // namespace lfd
