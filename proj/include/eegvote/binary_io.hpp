#pragma once

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "eegvote/errors.hpp"

namespace eegvote {

// Little-endian fixed-width encoding for model payloads.
class BinaryWriter {
 public:
  explicit BinaryWriter(std::ostream& os) : os_(os) {}

  void u8(std::uint8_t v) { os_.put(static_cast<char>(v)); }
  void u64(std::uint64_t v) {
    for (int b = 0; b < 8; ++b) os_.put(static_cast<char>((v >> (8 * b)) & 0xffU));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(const std::string& s) {
    u64(s.size());
    os_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }
  void f64s(const std::vector<double>& v) {
    u64(v.size());
    for (double x : v) f64(x);
  }

 private:
  std::ostream& os_;
};

class BinaryReader {
 public:
  explicit BinaryReader(std::istream& is) : is_(is) {}

  std::uint8_t u8() {
    const int c = is_.get();
    if (c == std::char_traits<char>::eof()) throw ModelError("truncated model payload");
    return static_cast<std::uint8_t>(c);
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int b = 0; b < 8; ++b) v |= std::uint64_t{u8()} << (8 * b);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  // Length-prefixed payloads are capped to catch corrupt files early.
  std::uint64_t count(std::uint64_t limit = std::uint64_t{1} << 32) {
    const auto n = u64();
    if (n > limit) throw ModelError("corrupt model payload: implausible length");
    return n;
  }
  std::string str() {
    std::string s(count(), '\0');
    is_.read(s.data(), static_cast<std::streamsize>(s.size()));
    if (!is_) throw ModelError("truncated model payload");
    return s;
  }
  std::vector<double> f64s() {
    std::vector<double> v(count());
    for (double& x : v) x = f64();
    return v;
  }

 private:
  std::istream& is_;
};

}  // namespace eegvote
