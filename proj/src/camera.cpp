#include "dqnav/camera.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "dqnav/error.hpp"

namespace dqnav {

namespace {

// Nearest planar-depth hit of a ray against one box. The ray is
// parametrized so that t equals the forward-axis coordinate (direction's
// forward component is 1), making t the planar depth directly.
bool ray_box_planar(const Vec3& origin, const Vec3& dir, const Box& b, double t_max,
                    double& t_hit) {
  double t0 = 0.0, t1 = t_max;
  const double o[3] = {origin.x, origin.y, origin.z};
  const double d[3] = {dir.x, dir.y, dir.z};
  const double lo[3] = {b.min.x, b.min.y, b.min.z};
  const double hi[3] = {b.max.x, b.max.y, b.max.z};
  for (int a = 0; a < 3; ++a) {
    if (d[a] == 0.0) {
      if (o[a] < lo[a] || o[a] > hi[a]) return false;
      continue;
    }
    double ta = (lo[a] - o[a]) / d[a];
    double tb = (hi[a] - o[a]) / d[a];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return false;
  }
  t_hit = t0;  // 0 when the origin is inside the box
  return true;
}

}  // namespace

DepthImage render_depth(const World& world, const QuadState& state,
                        const CameraModel& cam) {
  cam.validate();
  const double yaw = deg_to_rad(state.yaw_deg);
  const Vec3 forward{std::cos(yaw), std::sin(yaw), 0.0};
  const Vec3 cam_right{-forward.y, forward.x, 0.0};  // yaw + 90 degrees
  const Vec3 cam_down{0.0, 0.0, 1.0};

  const double focal = (cam.width / 2.0) / std::tan(deg_to_rad(cam.hfov_deg) / 2.0);

  DepthImage img;
  img.width = cam.width;
  img.height = cam.height;
  img.depth.resize(static_cast<size_t>(cam.width) * cam.height);

  for (int py = 0; py < cam.height; ++py) {
    const double v = (py + 0.5 - cam.height / 2.0) / focal;
    for (int px = 0; px < cam.width; ++px) {
      const double u = (px + 0.5 - cam.width / 2.0) / focal;
      // forward component is exactly 1, so the slab parameter is planar depth
      const Vec3 dir = forward + cam_right * u + cam_down * v;

      double depth = world.far_clip;
      for (const Box& b : world.obstacles) {
        double t;
        if (ray_box_planar(state.position, dir, b, depth, t)) depth = std::min(depth, t);
      }
      if (state.position.z >= world.ground_z) {
        depth = 0.0;  // camera inside the ground halfspace
      } else if (dir.z > 0.0) {
        depth = std::min(depth, (world.ground_z - state.position.z) / dir.z);
      }
      img.depth[static_cast<size_t>(py) * cam.width + px] =
          static_cast<float>(std::clamp(depth, 0.0, world.far_clip));
    }
  }
  return img;
}

Frame preprocess(const DepthImage& img, double far_clip, int out_size) {
  if (out_size < 1) fail(ErrorKind::invalid_argument, "preprocess: out_size must be >= 1");
  Frame f;
  f.size = out_size;
  f.data.resize(static_cast<size_t>(out_size) * out_size);

  const double sy = static_cast<double>(img.height) / out_size;
  const double sx = static_cast<double>(img.width) / out_size;
  const double inv_clip = 1.0 / far_clip;

  for (int oy = 0; oy < out_size; ++oy) {
    const double y0 = oy * sy, y1 = (oy + 1) * sy;
    const int iy0 = static_cast<int>(y0);
    const int iy1 = std::min(img.height - 1, static_cast<int>(std::ceil(y1)) - 1);
    for (int ox = 0; ox < out_size; ++ox) {
      const double x0 = ox * sx, x1 = (ox + 1) * sx;
      const int ix0 = static_cast<int>(x0);
      const int ix1 = std::min(img.width - 1, static_cast<int>(std::ceil(x1)) - 1);

      double acc = 0.0;
      for (int iy = iy0; iy <= iy1; ++iy) {
        const double wy = std::min<double>(iy + 1, y1) - std::max<double>(iy, y0);
        for (int ix = ix0; ix <= ix1; ++ix) {
          const double wx = std::min<double>(ix + 1, x1) - std::max<double>(ix, x0);
          acc += wy * wx * img.at(iy, ix);
        }
      }
      f.data[static_cast<size_t>(oy) * out_size + ox] =
          static_cast<float>(std::clamp(acc / (sy * sx) * inv_clip, 0.0, 1.0));
    }
  }
  return f;
}

void write_depth_pgm(const DepthImage& img, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) fail(ErrorKind::io, "cannot open " + path + " for writing");
  f << "P5\n" << img.width << " " << img.height << "\n65535\n";
  std::string payload;
  payload.reserve(img.depth.size() * 2);
  for (float d : img.depth) {
    const double cm = std::round(static_cast<double>(d) * 100.0);
    const uint16_t v = static_cast<uint16_t>(std::clamp(cm, 0.0, 65535.0));
    payload.push_back(static_cast<char>(v >> 8));  // PGM 16-bit is big-endian
    payload.push_back(static_cast<char>(v & 0xff));
  }
  f.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  if (!f) fail(ErrorKind::io, "failed writing " + path);
}

DepthImage read_depth_pgm(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::io, "cannot open " + path);
  std::string magic;
  int w = 0, h = 0, maxval = 0;
  f >> magic >> w >> h >> maxval;
  if (magic != "P5" || maxval != 65535 || w < 1 || h < 1)
    fail(ErrorKind::bad_format, path + ": expected a 16-bit binary PGM");
  f.get();  // single whitespace after maxval
  DepthImage img;
  img.width = w;
  img.height = h;
  img.depth.resize(static_cast<size_t>(w) * h);
  std::vector<char> buf(img.depth.size() * 2);
  f.read(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!f) fail(ErrorKind::bad_format, path + ": truncated PGM payload");
  for (size_t i = 0; i < img.depth.size(); ++i) {
    const uint16_t v = static_cast<uint16_t>(
        (static_cast<unsigned char>(buf[2 * i]) << 8) |
        static_cast<unsigned char>(buf[2 * i + 1]));
    img.depth[i] = static_cast<float>(v) / 100.0f;
  }
  return img;
}

}  // namespace dqnav
