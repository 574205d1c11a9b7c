#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace ncfista::problems {

struct Rating {
  std::int32_t user = 0;  // 1-indexed
  std::int32_t item = 0;  // 1-indexed
  double value = 0;
};

struct RatingSet {
  std::vector<Rating> entries;
  std::int32_t users = 0;
  std::int32_t items = 0;
};

class RatingFormatError : public std::runtime_error {
 public:
  RatingFormatError(const std::string& source, std::size_t line, const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline bool parse_field(std::string_view& rest, std::int64_t& out) {
  const auto tab = rest.find('\t');
  const std::string_view field = rest.substr(0, tab);
  if (field.empty()) return false;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
  if (ec != std::errc() || ptr != field.data() + field.size()) return false;
  rest = tab == std::string_view::npos ? std::string_view{} : rest.substr(tab + 1);
  return true;
}

}  // namespace detail

/// Parses MovieLens u.data records: user<TAB>item<TAB>rating<TAB>timestamp,
/// 1-indexed ids and ratings in {1..5}. Blank lines are skipped. Returns the
/// entries only; dimensions are filled in by infer_dims().
inline std::vector<Rating> parse_ratings(std::istream& in, const std::string& source = "<stream>") {
  std::vector<Rating> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::string_view rest(line);
    std::int64_t f[4];
    for (int i = 0; i < 4; ++i) {
      if (!detail::parse_field(rest, f[i])) {
        throw RatingFormatError(source, lineno, "expected four tab-separated integers");
      }
    }
    if (!rest.empty()) throw RatingFormatError(source, lineno, "trailing fields");
    if (f[0] < 1 || f[1] < 1 || f[0] > INT32_MAX || f[1] > INT32_MAX) {
      throw RatingFormatError(source, lineno, "ids must be positive");
    }
    if (f[2] < 1 || f[2] > 5) {
      throw RatingFormatError(source, lineno, "rating " + std::to_string(f[2]) + " outside 1..5");
    }
    out.push_back({static_cast<std::int32_t>(f[0]), static_cast<std::int32_t>(f[1]), static_cast<double>(f[2])});
  }
  return out;
}

/// Matrix dimensions as the largest user and item ids.
inline RatingSet infer_dims(std::vector<Rating> entries) {
  if (entries.empty()) throw std::runtime_error("cannot infer rating matrix dimensions from zero entries");
  RatingSet s;
  for (const Rating& r : entries) {
    s.users = std::max(s.users, r.user);
    s.items = std::max(s.items, r.item);
  }
  s.entries = std::move(entries);
  return s;
}

inline std::vector<Rating> read_ratings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_ratings(in, path);
}

inline RatingSet load_movielens(const std::string& path) { return infer_dims(read_ratings(path)); }

// ---------------------------------------------------------------------------
// Cached binary form: "NCFRAT01", u32 users, u32 items, u64 count, then
// count records of (u32 user, u32 item, f64 rating), all little-endian.
// ---------------------------------------------------------------------------

inline constexpr char kRatingMagic[8] = {'N', 'C', 'F', 'R', 'A', 'T', '0', '1'};

namespace detail {

template <class T>
void put_le(std::ostream& out, T v) {
  unsigned char buf[sizeof(T)];
  std::uint64_t bits = 0;
  std::memcpy(&bits, &v, sizeof(T));
  for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<unsigned char>(bits >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <class T>
T get_le(std::istream& in) {
  unsigned char buf[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(buf), sizeof(T))) throw std::runtime_error("truncated rating cache");
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) bits |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  T v;
  std::memcpy(&v, &bits, sizeof(T));
  return v;
}

}  // namespace detail

inline void write_rating_cache(const RatingSet& s, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(kRatingMagic, sizeof(kRatingMagic));
  detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(s.users));
  detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(s.items));
  detail::put_le<std::uint64_t>(out, s.entries.size());
  for (const Rating& r : s.entries) {
    detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(r.user));
    detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(r.item));
    detail::put_le<double>(out, r.value);
  }
  if (!out) throw std::runtime_error("failed writing " + path);
}

inline RatingSet read_rating_cache(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, kRatingMagic, 8) != 0) {
    throw std::runtime_error(path + ": not a rating cache");
  }
  RatingSet s;
  s.users = static_cast<std::int32_t>(detail::get_le<std::uint32_t>(in));
  s.items = static_cast<std::int32_t>(detail::get_le<std::uint32_t>(in));
  const auto count = detail::get_le<std::uint64_t>(in);
  s.entries.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    Rating r;
    r.user = static_cast<std::int32_t>(detail::get_le<std::uint32_t>(in));
    r.item = static_cast<std::int32_t>(detail::get_le<std::uint32_t>(in));
    r.value = detail::get_le<double>(in);
    s.entries.push_back(r);
  }
  return s;
}

/// Loads either a u.data text file or a binary cache, by magic bytes.
inline RatingSet load_ratings_any(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[8] = {};
  in.read(magic, 8);
  if (in.gcount() == 8 && std::memcmp(magic, kRatingMagic, 8) == 0) return read_rating_cache(path);
  return load_movielens(path);
}

}  // namespace ncfista::problems
