#include "lfd/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <random>
#include <sstream>
#include <string_view>

#include "lfd/error.hpp"
#include "lfd/io.hpp"

namespace lfd {

namespace {

std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double lattice(std::uint64_t salt, long long ix, long long iy, int channel) {
  std::uint64_t h = mix(salt ^ mix(static_cast<std::uint64_t>(ix) * 0x100000001b3ULL));
  h = mix(h ^ static_cast<std::uint64_t>(iy));
  h = mix(h + static_cast<std::uint64_t>(channel));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double smooth(double t) { return t * t * (3.0 - 2.0 * t); }

double value_noise(std::uint64_t salt, double u, double v, int channel) {
  const double fu = std::floor(u), fv = std::floor(v);
  const long long iu = static_cast<long long>(fu), iv = static_cast<long long>(fv);
  const double a = smooth(u - fu), b = smooth(v - fv);
  const double n00 = lattice(salt, iu, iv, channel), n10 = lattice(salt, iu + 1, iv, channel);
  const double n01 = lattice(salt, iu, iv + 1, channel), n11 = lattice(salt, iu + 1, iv + 1, channel);
  return (1 - b) * ((1 - a) * n00 + a * n10) + b * ((1 - a) * n01 + a * n11);
}

std::array<double, 3> parse_triple(const KvSection& s, const char* key, std::array<double, 3> fallback) {
  const auto raw = s.find(key);
  if (!raw) return fallback;
  std::istringstream in(*raw);
  std::array<double, 3> out{};
  if (!(in >> out[0])) fail(Errc::BadConfig, std::string("bad colour for ") + key);
  if (!(in >> out[1] >> out[2])) out[1] = out[2] = out[0];
  return out;
}

void reject_unknown(const KvSection& s, std::initializer_list<std::string_view> known) {
  for (const auto& [key, value] : s.entries) {
    if (std::find(known.begin(), known.end(), key) == known.end())
      fail(Errc::BadConfig, "unknown scene key '" + key + "'");
  }
}

struct Hit {
  int plane = -1;
  double d = 0.0, u = 0.0, v = 0.0;
};

class Renderer {
public:
  explicit Renderer(const SceneSpec& spec)
      : spec_(spec), cx_(spec.width / 2), cy_(spec.height / 2) {
    std::mt19937_64 rng(spec.seed);
    for (std::size_t i = 0; i < spec.planes.size(); ++i) salts_.push_back(rng());
  }

  double disparity(const PlaneSpec& p, double u, double v) const {
    return p.d0 + p.gx * (u - cx_) + p.gy * (v - cy_);
  }

  /// Nearest plane hit by the ray of view offset (dt, ds) through (x, y).
  Hit trace(double x, double y, int dt, int ds) const {
    Hit best;
    for (std::size_t i = 0; i < spec_.planes.size(); ++i) {
      const PlaneSpec& p = spec_.planes[i];
      // u + ds d(u, v) = x, v + dt d(u, v) = y.
      const double k = p.d0 - p.gx * cx_ - p.gy * cy_;
      const double a11 = 1.0 + ds * p.gx, a12 = ds * p.gy, b1 = x - ds * k;
      const double a21 = dt * p.gx, a22 = 1.0 + dt * p.gy, b2 = y - dt * k;
      const double det = a11 * a22 - a12 * a21;
      if (std::abs(det) < 1e-12) continue;
      const double u = (b1 * a22 - a12 * b2) / det;
      const double v = (a11 * b2 - a21 * b1) / det;
      if (u < p.x_min || u >= p.x_max || v < p.y_min || v >= p.y_max) continue;
      const double d = disparity(p, u, v);
      if (best.plane < 0 || d > best.d) best = {static_cast<int>(i), d, u, v};
    }
    return best;
  }

  /// The ray through the reprojected point of `h` hits a nearer plane.
  bool hidden(const Hit& h, int x, int y, int dt, int ds) const {
    const Hit o = trace(x + ds * h.d, y + dt * h.d, dt, ds);
    return o.plane != h.plane && o.d > h.d + 1e-9;
  }

  double shade(const Hit& h, int channel) const {
    if (h.plane < 0) return spec_.background[std::min(channel, 2)];
    const PlaneSpec& p = spec_.planes[h.plane];
    const double base = p.color[std::min(channel, 2)];
    const double su = h.u / p.scale, sv = h.v / p.scale;
    switch (p.texture) {
    case TextureKind::Flat: return base;
    case TextureKind::Checker: {
      const long long k = static_cast<long long>(std::floor(su)) + static_cast<long long>(std::floor(sv));
      return base + ((k & 1) ? 0.5 : -0.5) * p.contrast;
    }
    case TextureKind::Sine:
      return base + 0.5 * p.contrast * std::sin(2.0 * M_PI * su) * std::sin(2.0 * M_PI * sv);
    case TextureKind::Noise: return base + p.contrast * (value_noise(salts_[h.plane], su, sv, channel) - 0.5);
    }
    return base;
  }

private:
  const SceneSpec& spec_;
  double cx_, cy_;
  std::vector<std::uint64_t> salts_;
};

} // namespace

TextureKind parse_texture_kind(const std::string& name) {
  if (name == "noise") return TextureKind::Noise;
  if (name == "checker") return TextureKind::Checker;
  if (name == "flat") return TextureKind::Flat;
  if (name == "sine") return TextureKind::Sine;
  fail(Errc::BadConfig, "unknown texture '" + name + "'");
}

SceneSpec SceneSpec::from_kv(const KvDocument& doc) {
  SceneSpec s;
  const KvSection& r = doc.root;
  reject_unknown(r, {"n_t", "n_s", "height", "width", "channels", "seed", "noise_sigma", "background"});
  s.n_t = r.get_int("n_t", s.n_t);
  s.n_s = r.get_int("n_s", s.n_s);
  s.height = r.get_int("height", s.height);
  s.width = r.get_int("width", s.width);
  s.channels = r.get_int("channels", s.channels);
  s.seed = static_cast<std::uint64_t>(r.get_int("seed", static_cast<int>(s.seed)));
  s.noise_sigma = r.get_double("noise_sigma", s.noise_sigma);
  s.background = parse_triple(r, "background", s.background);
  for (const KvSection& sec : doc.sections) {
    if (sec.name != "plane") fail(Errc::BadConfig, "unknown scene section [" + sec.name + "]");
    reject_unknown(sec, {"d0", "gx", "gy", "x_min", "x_max", "y_min", "y_max", "texture", "color", "contrast", "scale"});
    PlaneSpec p;
    p.d0 = sec.get_double("d0", p.d0);
    p.gx = sec.get_double("gx", p.gx);
    p.gy = sec.get_double("gy", p.gy);
    p.x_min = sec.get_double("x_min", p.x_min);
    p.x_max = sec.get_double("x_max", p.x_max);
    p.y_min = sec.get_double("y_min", p.y_min);
    p.y_max = sec.get_double("y_max", p.y_max);
    p.texture = parse_texture_kind(sec.get_string("texture", "noise"));
    p.color = parse_triple(sec, "color", p.color);
    p.contrast = sec.get_double("contrast", p.contrast);
    p.scale = sec.get_double("scale", p.scale);
    s.planes.push_back(p);
  }
  return s;
}

SceneSpec SceneSpec::load(const std::filesystem::path& path) { return from_kv(load_kv(path)); }

SyntheticScene generate_synthetic(const SceneSpec& spec) {
  if (spec.n_t < 1 || spec.n_s < 1 || spec.height < 1 || spec.width < 1 || spec.channels < 1 || spec.channels > 4)
    fail(Errc::BadConfig, "scene dimensions out of range");
  if (!(spec.noise_sigma >= 0.0)) fail(Errc::BadConfig, "noise_sigma must be non-negative");
  for (const PlaneSpec& p : spec.planes)
    if (!(p.scale > 0.0)) fail(Errc::BadConfig, "plane texture scale must be positive");

  const Renderer render(spec);
  SyntheticScene out;
  out.lf = LightField4D(spec.n_t, spec.n_s, spec.height, spec.width, spec.channels);
  const int t0 = spec.n_t / 2, s0 = spec.n_s / 2;
  std::mt19937_64 rng(spec.seed ^ 0x5eedULL);
  std::normal_distribution<double> noise(0.0, spec.noise_sigma > 0.0 ? spec.noise_sigma : 1.0);
  for (int t = 0; t < spec.n_t; ++t) {
    for (int s = 0; s < spec.n_s; ++s) {
      for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) {
          const Hit h = render.trace(x, y, t - t0, s - s0);
          for (int c = 0; c < spec.channels; ++c) {
            double v = render.shade(h, c);
            if (spec.noise_sigma > 0.0) v += noise(rng);
            out.lf.at(t, s, y, x, c) = static_cast<float>(std::clamp(v, 0.0, 1.0));
          }
        }
      }
    }
  }

  out.ground_truth = Array2D<double>(spec.height, spec.width, 0.0);
  out.plane_id = Array2D<int>(spec.height, spec.width, -1);
  out.occlusion_band = Array2D<std::uint8_t>(spec.height, spec.width, 0);
  out.textureless = Array2D<std::uint8_t>(spec.height, spec.width, 0);
  for (int y = 0; y < spec.height; ++y) {
    for (int x = 0; x < spec.width; ++x) {
      const Hit h = render.trace(x, y, 0, 0);
      out.plane_id(y, x) = h.plane;
      out.ground_truth(y, x) = h.plane >= 0 ? h.d : 0.0;
      if (h.plane < 0) continue;
      out.textureless(y, x) = spec.planes[h.plane].texture == TextureKind::Flat ? 1 : 0;
      for (int t = 0; t < spec.n_t && !out.occlusion_band(y, x); ++t) {
        for (int s = 0; s < spec.n_s; ++s) {
          if (render.hidden(h, x, y, t - t0, s - s0)) {
            out.occlusion_band(y, x) = 1;
            break;
          }
        }
      }
    }
  }
  return out;
}

Array2D<std::uint8_t> occluded_in_view(const SceneSpec& spec, int t, int s) {
  const Renderer render(spec);
  Array2D<std::uint8_t> out(spec.height, spec.width, 0);
  for (int y = 0; y < spec.height; ++y) {
    for (int x = 0; x < spec.width; ++x) {
      const Hit h = render.trace(x, y, 0, 0);
      if (h.plane >= 0 && render.hidden(h, x, y, t - spec.n_t / 2, s - spec.n_s / 2)) out(y, x) = 1;
    }
  }
  return out;
}

void save_synthetic(const std::filesystem::path& dir, const SyntheticScene& scene) {
  LayoutConfig layout;
  layout.n_t = scene.lf.n_t();
  layout.n_s = scene.lf.n_s();
  layout.require_square = false;
  save_lightfield(dir, scene.lf, layout);
  save_pfm(dir / layout.ground_truth, to_float(scene.ground_truth));
  save_mask_png(dir / "occlusion_mask.png", scene.occlusion_band);
  save_mask_png(dir / "textureless_mask.png", scene.textureless);
}

} // namespace lfd
