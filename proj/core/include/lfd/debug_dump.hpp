#pragma once

#include <filesystem>

#include "lfd/pipeline.hpp"

namespace lfd {

/// Colour-coded categories: None black, Left red, Right green, Up blue, Down yellow.
Image render_categories(const Array2D<Occlusion>& category);
/// Central view with superpixel boundaries in red and texture points in green.
Image render_superpixel_overlay(const Image& central_view, const SuperpixelSeg& seg,
                                const Array2D<std::uint8_t>* texture_points = nullptr);

void write_sepi_png(const std::filesystem::path& path, const Sepi& sepi);
void write_cost_curve_csv(const std::filesystem::path& path, const CostCurve& curve);
/// id,n,lti,textureless,d_before,d_after
void write_superpixel_csv(const std::filesystem::path& path, const TexturelessResult& result);
/// x,y,d0,delta,d_refined,eta,cost for every pixel
void write_joint_csv(const std::filesystem::path& path, const JointDiagnostics& diag);

/// Every retained intermediate of a pipeline run, one file per artifact.
void dump_intermediates(const std::filesystem::path& dir, const LightField4D& lf, const PipelineResult& result);

} // namespace lfd
