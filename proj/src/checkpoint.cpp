#include "checkpoint.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <vector>

#include "error.hpp"

namespace lcsim {

namespace {

constexpr char kMagic[4] = {'L', 'C', 'S', 'M'};
constexpr std::size_t kHeaderBytes = 4 + 3 * 4 + 2 * 8;

template <class T>
void put_le(std::vector<unsigned char>& buf, T v) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  buf.insert(buf.end(), b, b + sizeof(T));
}

template <class T>
T get_le(const unsigned char* p) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

std::vector<unsigned char> read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

CheckpointHeader parse_header(const std::vector<unsigned char>& buf, const std::string& path) {
  if (buf.size() < kHeaderBytes) throw FormatError("checkpoint " + path + " is truncated");
  if (std::memcmp(buf.data(), kMagic, 4) != 0)
    throw FormatError("checkpoint " + path + " has bad magic");
  CheckpointHeader h;
  h.version = get_le<std::uint32_t>(buf.data() + 4);
  h.nx = get_le<std::uint32_t>(buf.data() + 8);
  h.ny = get_le<std::uint32_t>(buf.data() + 12);
  h.t = get_le<double>(buf.data() + 16);
  h.shear_time = get_le<double>(buf.data() + 24);
  if (h.version != kCheckpointVersion)
    throw FormatError("checkpoint " + path + " has unsupported version " +
                      std::to_string(h.version));
  return h;
}

}  // namespace

void save_checkpoint(const FlowState& s, const std::string& path) {
  const Grid& g = s.omega.grid();
  std::vector<unsigned char> buf;
  buf.reserve(kHeaderBytes + 4 * g.size() * 16);
  buf.insert(buf.end(), kMagic, kMagic + 4);
  put_le<std::uint32_t>(buf, kCheckpointVersion);
  put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(g.nx));
  put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(g.ny));
  put_le<double>(buf, s.t);
  put_le<double>(buf, s.shear_time());
  for (const SpectralField* f : {&s.omega, &s.d[0], &s.d[1], &s.d[2]})
    for (const cplx& c : f->coeffs()) {
      put_le<double>(buf, c.real());
      put_le<double>(buf, c.imag());
    }

  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write checkpoint " + tmp);
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!out) throw IoError("short write on checkpoint " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename checkpoint to " + path + ": " + ec.message());
}

CheckpointHeader read_checkpoint_header(const std::string& path) {
  return parse_header(read_all(path), path);
}

FlowState load_checkpoint(const std::string& path, const Grid& grid) {
  const std::vector<unsigned char> buf = read_all(path);
  const CheckpointHeader h = parse_header(buf, path);
  if (static_cast<int>(h.nx) != grid.nx || static_cast<int>(h.ny) != grid.ny)
    throw FormatError("checkpoint " + path + " is " + std::to_string(h.nx) + "x" +
                      std::to_string(h.ny) + ", expected " + std::to_string(grid.nx) + "x" +
                      std::to_string(grid.ny));
  const std::size_t expected = kHeaderBytes + 4 * grid.size() * 16;
  if (buf.size() < expected) throw FormatError("checkpoint " + path + " is truncated");
  if (buf.size() > expected) throw FormatError("checkpoint " + path + " has trailing bytes");

  FlowState s = zero_state(grid);
  s.t = h.t;
  s.set_shear_time(h.shear_time);
  const unsigned char* p = buf.data() + kHeaderBytes;
  for (SpectralField* f : {&s.omega, &s.d[0], &s.d[1], &s.d[2]})
    for (cplx& c : f->coeffs()) {
      c = {get_le<double>(p), get_le<double>(p + 8)};
      p += 16;
    }
  return s;
}

}  // namespace lcsim
