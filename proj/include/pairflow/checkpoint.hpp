#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pairflow/dynamics.hpp"

namespace pairflow {

// Self-describing binary snapshot of a pair state: fixed little-endian
// header followed by the dense coefficient grids of u and w. Round-trips
// bit-exactly.
struct Checkpoint {
  std::uint32_t version = 1;
  std::int32_t resolution = 0;
  double domain_size = 0.0;
  double nu = 0.0;
  double lambda = 0.0;
  double t = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t stream_pos_u = 0;
  std::uint64_t stream_pos_w = 0;
  std::uint64_t noise_hash = 0;
  std::vector<Complex> u;
  std::vector<Complex> w;
};

Checkpoint make_checkpoint(const SimulationConfig& cfg, const PairState& state,
                           std::uint64_t pos_u, std::uint64_t pos_w,
                           std::uint64_t noise_hash);

void write_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint read_checkpoint(const std::string& path);

// Rehydrates the fields; the lattice must match the stored resolution.
PairState restore_state(const Checkpoint& ckpt, const Lattice& lattice);

}  // namespace pairflow
