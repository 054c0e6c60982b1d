#include "lfd/debug_dump.hpp"

#include <algorithm>
#include <fstream>

#include "lfd/error.hpp"
#include "lfd/io.hpp"

namespace lfd {

namespace {

std::ofstream open_csv(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(Errc::Io, "cannot write " + path.string());
  out.precision(17);
  return out;
}

void save_map(const std::filesystem::path& dir, const char* stem, const Array2D<double>& values) {
  if (values.size() == 0) return;
  save_pfm(dir / (std::string(stem) + ".pfm"), to_float(values));
}

void save_field(const std::filesystem::path& dir, const char* stem, const SlopeField& f) {
  if (f.height() == 0) return;
  save_map(dir, (std::string(stem) + "_disp").c_str(), f.disparity.values);
  save_map(dir, (std::string(stem) + "_conf").c_str(), f.confidence);
}

} // namespace

Image render_categories(const Array2D<Occlusion>& category) {
  static constexpr float colours[5][3] = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0}};
  Image img(category.height(), category.width(), 3);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      for (int c = 0; c < 3; ++c) img.at(y, x, c) = colours[static_cast<int>(category(y, x))][c];
  return img;
}

Image render_superpixel_overlay(const Image& central_view, const SuperpixelSeg& seg,
                                const Array2D<std::uint8_t>* texture_points) {
  Image img(central_view.height, central_view.width, 3);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const float* p = central_view.pixel(y, x);
      for (int c = 0; c < 3; ++c) img.at(y, x, c) = p[std::min(c, central_view.channels - 1)];
      if (texture_points && (*texture_points)(y, x)) {
        img.at(y, x, 0) = 0.0f;
        img.at(y, x, 1) = 1.0f;
        img.at(y, x, 2) = 0.0f;
      }
      if (seg.is_boundary(y, x)) {
        img.at(y, x, 0) = 1.0f;
        img.at(y, x, 1) = 0.0f;
        img.at(y, x, 2) = 0.0f;
      }
    }
  }
  return img;
}

void write_sepi_png(const std::filesystem::path& path, const Sepi& sepi) {
  Image img = sepi.render();
  for (float& v : img.data) v = std::clamp(v, 0.0f, 1.0f);
  save_png(path, img);
}

void write_cost_curve_csv(const std::filesystem::path& path, const CostCurve& curve) {
  std::ofstream out = open_csv(path);
  out << "disparity,variance,defined,best\n";
  for (std::size_t i = 0; i < curve.candidates.size(); ++i)
    out << curve.candidates[i] << ',' << curve.variance[i] << ',' << int(curve.defined[i]) << ','
        << (static_cast<int>(i) == curve.best_index ? 1 : 0) << '\n';
}

void write_superpixel_csv(const std::filesystem::path& path, const TexturelessResult& result) {
  std::ofstream out = open_csv(path);
  out << "id,n,lti,textureless,d_before,d_after\n";
  for (const SuperpixelUpdate& u : result.updates) {
    const Superpixel& sp = result.seg.superpixels[u.id];
    out << u.id << ',' << sp.n << ',' << sp.lti << ',' << (sp.textureless ? 1 : 0) << ',' << u.d_before << ','
        << u.d_after << '\n';
  }
}

void write_joint_csv(const std::filesystem::path& path, const JointDiagnostics& diag) {
  std::ofstream out = open_csv(path);
  out << "x,y,d0,delta,d_refined,eta,cost\n";
  for (int y = 0; y < diag.d0.height(); ++y)
    for (int x = 0; x < diag.d0.width(); ++x)
      out << x << ',' << y << ',' << diag.d0(y, x) << ',' << diag.delta(y, x) << ',' << diag.refined(y, x) << ','
          << diag.eta(y, x) << ',' << diag.cost(y, x) << '\n';
}

void dump_intermediates(const std::filesystem::path& dir, const LightField4D& lf, const PipelineResult& result) {
  std::filesystem::create_directories(dir);
  const PipelineIntermediates& mid = result.intermediates;
  save_field(dir, "initial", mid.initial);
  save_field(dir, "occlusion", mid.after_occlusion);
  save_field(dir, "joint", mid.after_joint);
  save_field(dir, "textureless", mid.after_textureless);
  if (mid.occlusion.category.size() > 0) {
    save_png(dir / "occlusion_categories.png", render_categories(mid.occlusion.category));
    save_mask_png(dir / "occlusion_predictor.png", mid.occlusion.predictor);
  }
  if (mid.joint.d0.size() > 0) write_joint_csv(dir / "joint.csv", mid.joint);
  if (mid.textureless.seg.count() > 0) {
    save_png(dir / "superpixels.png",
             render_superpixel_overlay(lf.central_view(), mid.textureless.seg, &mid.textureless.texture_points));
    write_superpixel_csv(dir / "superpixels.csv", mid.textureless);
  }
  save_map(dir, "weights", mid.weights);
  save_map(dir, "smoothness", mid.smoothness.s);
  std::ofstream timing = open_csv(dir / "timings.csv");
  timing << "stage,seconds\n";
  for (const StageTiming& t : result.timings) timing << t.stage << ',' << t.seconds << '\n';
}

} // namespace lfd
