#pragma once

#include <string>

#include "dqnav/tensor.hpp"

namespace dqnav {

// Checkpoint container: magic "DQNAV", format version u32, tensor count
// u32, then per tensor { name_len u32, name bytes, rank u32, dims u32...,
// little-endian f32 payload }. Every multi-byte field is little-endian.
inline constexpr char kCheckpointMagic[5] = {'D', 'Q', 'N', 'A', 'V'};
inline constexpr uint32_t kCheckpointVersion = 1;

void save_params(const NetworkParams<float>& params, const std::string& path);
NetworkParams<float> load_params(const std::string& path);

}  // namespace dqnav
