#pragma once

#include <string>
#include <vector>

#include "dqnav/frames.hpp"
#include "dqnav/world.hpp"

namespace dqnav {

// Forward-facing pinhole camera at the quadcopter pose: level pitch,
// heading along body yaw.
struct CameraModel {
  int width = 256;
  int height = 144;
  double hfov_deg = 90.0;

  void validate() const {
    if (width < 1 || height < 1)
      fail(ErrorKind::invalid_argument, "camera resolution must be positive");
    if (!(hfov_deg > 0.0 && hfov_deg < 180.0))
      fail(ErrorKind::invalid_argument, "camera hfov must lie in (0, 180)");
  }
};

// Per-pixel planar depth in meters (distance along the camera forward
// axis, not ray length), clamped to [0, far_clip].
struct DepthImage {
  int width = 0;
  int height = 0;
  std::vector<float> depth;  // row-major, row 0 at the top

  float at(int y, int x) const { return depth[static_cast<size_t>(y) * width + x]; }
};

DepthImage render_depth(const World& world, const QuadState& state,
                        const CameraModel& cam);

// Area-average resize to out_size x out_size, then normalize by far_clip
// into [0, 1].
Frame preprocess(const DepthImage& img, double far_clip, int out_size);

// Depth dump for debugging: binary 16-bit PGM, one sample per pixel equal
// to the depth in centimeters, clamped to 65535.
void write_depth_pgm(const DepthImage& img, const std::string& path);
DepthImage read_depth_pgm(const std::string& path);

}  // namespace dqnav
