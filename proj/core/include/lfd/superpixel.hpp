#pragma once

#include <cstdint>
#include <vector>

#include "lfd/array2d.hpp"
#include "lfd/light_field.hpp"

namespace lfd {

struct SlicParams {
  int size = 15;            // target superpixel side in pixels
  double compactness = 10.0; // CIELAB units per grid interval
  int iterations = 10;
};

/// Side length used for an image: 15 up to 512 px on the longer side, 17 above.
int default_superpixel_size(int height, int width);

struct Superpixel {
  int id = 0;
  int n = 0;                   // pixel count
  std::vector<int> pixels;     // linear indices y * width + x
  std::vector<int> boundary;   // pixels with a 4-neighbour in another superpixel
  std::vector<int> neighbors;  // sorted adjacent ids
  double cx = 0.0, cy = 0.0;   // centroid
  double mean_value = 0.0;     // HSV value
  double mean_depth = 0.0;
  double lti = 0.0;
  bool textureless = false;
};

struct SuperpixelSeg {
  Array2D<int> labels;
  std::vector<Superpixel> superpixels;
  int count() const { return static_cast<int>(superpixels.size()); }
  bool is_boundary(int y, int x) const;
};

/// SLIC over CIELAB + position, followed by connectivity enforcement. Labels
/// are 0..K-1, each a 4-connected region. Deterministic.
Array2D<int> slic(const Image& img, const SlicParams& params);

/// Pixel lists, boundaries, adjacency, centroids and mean HSV value. Mean depth
/// is filled from `depth` when it has the image's shape.
SuperpixelSeg build_segmentation(Array2D<int> labels, const Image& img, const Array2D<double>* depth = nullptr);

SuperpixelSeg segment_superpixels(const Image& central_view, const SlicParams& params);

/// Recomputes mean_depth of every superpixel from `depth`.
void update_mean_depth(SuperpixelSeg& seg, const Array2D<double>& depth);

} // namespace lfd
