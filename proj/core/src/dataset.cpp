#include "mlvn/dataset.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "mlvn/error.hpp"
#include "mlvn/random.hpp"

namespace mlvn {

namespace {

constexpr char kMagic[4] = {'M', 'L', 'V', 'N'};

void put_u8(std::string& buf, std::uint8_t v) { buf.push_back(static_cast<char>(v)); }

void put_u16(std::string& buf, std::uint16_t v) {
  put_u8(buf, static_cast<std::uint8_t>(v & 0xff));
  put_u8(buf, static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::string& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) put_u8(buf, static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}

std::int16_t to_tenths(double k) { return static_cast<std::int16_t>(std::lround(k * 10.0)); }

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  bool at_eof() { return in_.peek() == std::char_traits<char>::eof(); }

  void bytes(char* dst, std::size_t n, const char* what) {
    in_.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) {
      throw Error(ErrorKind::FormatError, std::string("truncated ") + what);
    }
  }

  std::uint8_t u8(const char* what) {
    char c;
    bytes(&c, 1, what);
    return static_cast<std::uint8_t>(c);
  }

  std::uint16_t u16(const char* what) {
    const std::uint16_t lo = u8(what);
    return static_cast<std::uint16_t>(lo | (u8(what) << 8));
  }

  std::uint32_t u32(const char* what) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(u8(what)) << (8 * i);
    return v;
  }

 private:
  std::istream& in_;
};

std::size_t payload_size(int size, int labels) {
  const std::size_t points = static_cast<std::size_t>(size) * size;
  return (kFeaturePlanes * points + 7) / 8 + (labels + 7) / 8 + points + 2 + 4;
}

}  // namespace

void write_dataset(const Dataset& data, std::ostream& out) {
  std::string buf;
  buf.append(kMagic, 4);
  put_u16(buf, Dataset::kVersion);
  put_u8(buf, static_cast<std::uint8_t>(data.size));
  put_u16(buf, static_cast<std::uint16_t>(to_tenths(data.grid.k_min())));
  put_u16(buf, static_cast<std::uint16_t>(to_tenths(data.grid.k_max())));
  put_u16(buf, static_cast<std::uint16_t>(to_tenths(data.grid.center())));
  const int points = data.size * data.size;
  const int labels = data.grid.count();
  const std::size_t payload = payload_size(data.size, labels);
  for (const auto& r : data.records) {
    if (r.features.size != data.size || static_cast<int>(r.labels.size()) != labels ||
        static_cast<int>(r.ownership.size()) != points) {
      throw Error(ErrorKind::DimMismatch, "record does not match dataset dimensions");
    }
    put_u32(buf, static_cast<std::uint32_t>(payload));
    std::uint8_t acc = 0;
    int nbits = 0;
    auto push_bit = [&](bool bit) {
      acc |= static_cast<std::uint8_t>(bit) << nbits;
      if (++nbits == 8) {
        put_u8(buf, acc);
        acc = 0;
        nbits = 0;
      }
    };
    auto flush = [&] {
      if (nbits > 0) put_u8(buf, acc);
      acc = 0;
      nbits = 0;
    };
    for (std::uint8_t b : r.features.planes) push_bit(b != 0);
    flush();
    for (std::int8_t l : r.labels) push_bit(l > 0);
    flush();
    buf.append(reinterpret_cast<const char*>(r.ownership.data()), r.ownership.size());
    put_u16(buf, r.move_index);
    put_u32(buf, r.game_id);
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error(ErrorKind::IoError, "dataset write failed");
}

void write_dataset(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
  write_dataset(data, out);
}

Dataset read_dataset(std::istream& in) {
  Reader rd(in);
  char magic[4];
  rd.bytes(magic, 4, "header");
  if (std::memcmp(magic, kMagic, 4) != 0) throw Error(ErrorKind::FormatError, "bad dataset magic");
  const std::uint16_t version = rd.u16("header");
  if (version != Dataset::kVersion) {
    throw Error(ErrorKind::FormatError, "unsupported dataset version " + std::to_string(version));
  }
  Dataset data;
  data.size = rd.u8("header");
  const double k_min = static_cast<std::int16_t>(rd.u16("header")) / 10.0;
  const double k_max = static_cast<std::int16_t>(rd.u16("header")) / 10.0;
  const double center = static_cast<std::int16_t>(rd.u16("header")) / 10.0;
  if (data.size < 5 || data.size > 19 || data.size % 2 == 0) {
    throw Error(ErrorKind::FormatError, "bad board size in dataset header");
  }
  try {
    data.grid = KomiGrid(k_min, k_max, center);
  } catch (const Error&) {
    throw Error(ErrorKind::FormatError, "bad komi grid in dataset header");
  }
  const int points = data.size * data.size;
  const int labels = data.grid.count();
  const std::size_t expected = payload_size(data.size, labels);
  std::vector<char> payload(expected);
  while (!rd.at_eof()) {
    const std::uint32_t len = rd.u32("record length");
    if (len != expected) throw Error(ErrorKind::FormatError, "unexpected record length");
    rd.bytes(payload.data(), expected, "record");
    const auto* p = reinterpret_cast<const std::uint8_t*>(payload.data());
    TrainingRecord r;
    r.features.size = data.size;
    r.features.planes.resize(static_cast<std::size_t>(kFeaturePlanes) * points);
    for (std::size_t i = 0; i < r.features.planes.size(); ++i) {
      r.features.planes[i] = (p[i / 8] >> (i % 8)) & 1u;
    }
    p += (r.features.planes.size() + 7) / 8;
    r.labels.resize(labels);
    for (int i = 0; i < labels; ++i) r.labels[i] = ((p[i / 8] >> (i % 8)) & 1u) ? 1 : -1;
    p += (labels + 7) / 8;
    r.ownership.assign(p, p + points);
    p += points;
    r.move_index = static_cast<std::uint16_t>(p[0] | (p[1] << 8));
    p += 2;
    r.game_id = static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
                (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
    r.side_to_move = r.features.at(kPlaneBlackToMove, 0) ? Color::Black : Color::White;
    data.records.push_back(std::move(r));
  }
  return data;
}

Dataset read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  return read_dataset(in);
}

std::vector<GameRecord> generate_games(int count, int size, std::uint64_t seed, ResolutionMode mode, double komi,
                                       std::uint32_t first_id, int* discarded) {
  std::vector<GameRecord> games;
  games.reserve(count);
  const Policy policy = light_policy();
  int skipped = 0;
  for (std::uint32_t id = first_id; static_cast<int>(games.size()) < count; ++id) {
    try {
      games.push_back(generate_game(policy, size, derive_seed(seed, id), mode, id, komi));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::MoveLimitExceeded) throw;
      ++skipped;
    }
  }
  if (discarded) *discarded = skipped;
  return games;
}

Dataset build_dataset(std::span<const GameRecord> games, int m, const KomiGrid& grid, std::uint64_t seed) {
  Dataset data;
  data.grid = grid;
  if (!games.empty()) data.size = games.front().size;
  Rng rng(mix_seed(seed));
  for (const GameRecord& g : games) {
    if (g.size != data.size) throw Error(ErrorKind::DimMismatch, "games of different board sizes");
    auto records = sample_positions(g, m, grid, rng);
    for (auto& r : records) data.records.push_back(std::move(r));
  }
  return data;
}

bool is_heldout_game(std::uint32_t game_id, double fraction, std::uint64_t seed) noexcept {
  const double u = static_cast<double>(derive_seed(seed, game_id) >> 11) * 0x1.0p-53;
  return u < fraction;
}

std::pair<std::vector<TrainingRecord>, std::vector<TrainingRecord>> split_by_game(
    std::vector<TrainingRecord> records, double fraction, std::uint64_t seed) {
  std::pair<std::vector<TrainingRecord>, std::vector<TrainingRecord>> out;
  for (auto& r : records) {
    (is_heldout_game(r.game_id, fraction, seed) ? out.second : out.first).push_back(std::move(r));
  }
  return out;
}

}  // namespace mlvn
