#include "dqnav/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>

#include "dqnav/error.hpp"

namespace dqnav {

namespace {

void put_u32(std::string& out, uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 24) & 0xff));
}

void put_f32(std::string& out, float v) {
  put_u32(out, std::bit_cast<uint32_t>(v));
}

class Reader {
 public:
  Reader(const std::string& bytes, const std::string& path)
      : bytes_(bytes), path_(path) {}

  void raw(void* dst, size_t n) {
    if (pos_ + n > bytes_.size())
      fail(ErrorKind::bad_format, path_ + ": truncated checkpoint file");
    std::memcpy(dst, bytes_.data() + pos_, n);
    pos_ += n;
  }

  uint32_t u32() {
    unsigned char b[4];
    raw(b, 4);
    return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
           (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
  }

  float f32() { return std::bit_cast<float>(u32()); }

  std::string str(size_t n) {
    if (pos_ + n > bytes_.size())
      fail(ErrorKind::bad_format, path_ + ": truncated checkpoint file");
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  bool at_end() const { return pos_ == bytes_.size(); }

 private:
  const std::string& bytes_;
  std::string path_;
  size_t pos_ = 0;
};

}  // namespace

void save_params(const NetworkParams<float>& params, const std::string& path) {
  std::string out;
  out.append(kCheckpointMagic, sizeof(kCheckpointMagic));
  put_u32(out, kCheckpointVersion);
  put_u32(out, static_cast<uint32_t>(params.count()));
  for (const auto& t : params.tensors) {
    put_u32(out, static_cast<uint32_t>(t.name.size()));
    out.append(t.name);
    put_u32(out, static_cast<uint32_t>(t.shape.size()));
    for (int d : t.shape) put_u32(out, static_cast<uint32_t>(d));
    for (float v : t.data) put_f32(out, v);
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) fail(ErrorKind::io, "cannot open " + path + " for writing");
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) fail(ErrorKind::io, "failed writing " + path);
}

NetworkParams<float> load_params(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::io, "cannot open " + path);
  std::string bytes((std::istreambuf_iterator<char>(f)),
                    std::istreambuf_iterator<char>());

  Reader r(bytes, path);
  char magic[sizeof(kCheckpointMagic)];
  r.raw(magic, sizeof(magic));
  if (std::memcmp(magic, kCheckpointMagic, sizeof(magic)) != 0)
    fail(ErrorKind::bad_format, path + ": not a checkpoint file (bad magic)");
  const uint32_t version = r.u32();
  if (version != kCheckpointVersion)
    fail(ErrorKind::bad_format,
         path + ": unsupported checkpoint version " + std::to_string(version));

  NetworkParams<float> params;
  const uint32_t count = r.u32();
  for (uint32_t i = 0; i < count; ++i) {
    ParamTensor<float> t;
    const uint32_t name_len = r.u32();
    if (name_len > 4096)
      fail(ErrorKind::bad_format, path + ": implausible tensor name length");
    t.name = r.str(name_len);
    const uint32_t rank = r.u32();
    if (rank > 8) fail(ErrorKind::bad_format, path + ": implausible tensor rank");
    size_t n = 1;
    for (uint32_t d = 0; d < rank; ++d) {
      const uint32_t dim = r.u32();
      if (dim == 0 || n > std::numeric_limits<uint32_t>::max() / dim)
        fail(ErrorKind::bad_format, path + ": bad tensor dims");
      t.shape.push_back(static_cast<int>(dim));
      n *= dim;
    }
    t.data.resize(n);
    for (size_t j = 0; j < n; ++j) t.data[j] = r.f32();
    params.tensors.push_back(std::move(t));
  }
  if (!r.at_end())
    fail(ErrorKind::bad_format, path + ": trailing bytes after tensor payload");
  return params;
}

}  // namespace dqnav
