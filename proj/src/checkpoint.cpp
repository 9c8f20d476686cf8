#include "pairflow/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include "pairflow/errors.hpp"

namespace pairflow {

namespace {

constexpr char kMagic[4] = {'P', 'F', 'L', 'W'};

void put_u32(std::string& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(char((v >> (8 * i)) & 0xff));
}
void put_u64(std::string& buf, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buf.push_back(char((v >> (8 * i)) & 0xff));
}
void put_f64(std::string& buf, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  put_u64(buf, bits);
}

struct Reader {
  const unsigned char* p;
  const unsigned char* end;
  std::uint32_t u32() {
    require(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(p[i]) << (8 * i);
    p += 4;
    return v;
  }
  std::uint64_t u64() {
    require(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(p[i]) << (8 * i);
    p += 8;
    return v;
  }
  double f64() {
    const std::uint64_t bits = u64();
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
  }
  void require(std::size_t n) {
    if (std::size_t(end - p) < n)
      throw ConfigError("checkpoint file truncated");
  }
};

}  // namespace

Checkpoint make_checkpoint(const SimulationConfig& cfg, const PairState& state,
                           std::uint64_t pos_u, std::uint64_t pos_w,
                           std::uint64_t noise_hash) {
  Checkpoint c;
  c.resolution = cfg.resolution;
  c.domain_size = cfg.domain_size;
  c.nu = cfg.nu;
  c.lambda = cfg.lambda;
  c.t = state.t;
  c.seed = cfg.seed;
  c.stream_pos_u = pos_u;
  c.stream_pos_w = pos_w;
  c.noise_hash = noise_hash;
  c.u.assign(state.u.raw().begin(), state.u.raw().end());
  c.w.assign(state.w.raw().begin(), state.w.raw().end());
  return c;
}

void write_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  std::string buf;
  buf.reserve(64 + ckpt.u.size() * 32);
  buf.append(kMagic, 4);
  put_u32(buf, ckpt.version);
  put_u32(buf, std::uint32_t(ckpt.resolution));
  put_f64(buf, ckpt.domain_size);
  put_f64(buf, ckpt.nu);
  put_f64(buf, ckpt.lambda);
  put_f64(buf, ckpt.t);
  put_u64(buf, ckpt.seed);
  put_u64(buf, ckpt.stream_pos_u);
  put_u64(buf, ckpt.stream_pos_w);
  put_u64(buf, ckpt.noise_hash);
  for (const std::vector<Complex>* grid : {&ckpt.u, &ckpt.w})
    for (const Complex& c : *grid) {
      put_f64(buf, c.real());
      put_f64(buf, c.imag());
    }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot open checkpoint for writing: " + path);
  out.write(buf.data(), std::streamsize(buf.size()));
  if (!out) throw ConfigError("short write on checkpoint: " + path);
}

Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open checkpoint: " + path);
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  if (data.size() < 4 || std::memcmp(data.data(), kMagic, 4) != 0)
    throw ConfigError("not a checkpoint file: " + path);
  Reader r{reinterpret_cast<const unsigned char*>(data.data()) + 4,
           reinterpret_cast<const unsigned char*>(data.data()) + data.size()};
  Checkpoint c;
  c.version = r.u32();
  if (c.version != 1)
    throw ConfigError("unsupported checkpoint version " +
                      std::to_string(c.version));
  c.resolution = std::int32_t(r.u32());
  c.domain_size = r.f64();
  c.nu = r.f64();
  c.lambda = r.f64();
  c.t = r.f64();
  c.seed = r.u64();
  c.stream_pos_u = r.u64();
  c.stream_pos_w = r.u64();
  c.noise_hash = r.u64();
  const std::size_t grid = std::size_t(c.resolution) * std::size_t(c.resolution);
  c.u.resize(grid);
  c.w.resize(grid);
  for (std::vector<Complex>* target : {&c.u, &c.w})
    for (Complex& v : *target) {
      const double re = r.f64();
      const double im = r.f64();
      v = Complex(re, im);
    }
  if (r.p != r.end) throw ConfigError("trailing bytes in checkpoint: " + path);
  return c;
}

PairState restore_state(const Checkpoint& ckpt, const Lattice& lattice) {
  if (lattice.n() != ckpt.resolution || lattice.length() != ckpt.domain_size)
    throw ConfigError("checkpoint lattice does not match the configuration");
  PairState state(lattice);
  std::copy(ckpt.u.begin(), ckpt.u.end(), state.u.raw().begin());
  std::copy(ckpt.w.begin(), ckpt.w.end(), state.w.raw().begin());
  state.t = ckpt.t;
  return state;
}

}  // namespace pairflow
