// Copyright 2026 the derand authors
// SPDX-License-Identifier: Apache-2.0

#include "derand/common.hpp"

namespace derand {

BitString BitString::from_string(const std::string& s) {
  BitString out;
  for (char c : s) {
    if (c == '0')
      out.push_back(0);
    else if (c == '1')
      out.push_back(1);
    else
      fail(errc::parse, std::string("invalid bit character '") + c + "'");
  }
  return out;
}

static int hex_val(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  fail(errc::parse, std::string("invalid hex character '") + c + "'");
}

BitString BitString::from_hex(const std::string& hex, std::size_t nbits) {
  BitString out;
  for (char c : hex) {
    int v = hex_val(c);
    for (int k = 3; k >= 0; --k) out.push_back((v >> k) & 1);
  }
  if (out.size() < nbits) fail(errc::invalid_argument, "hex string too short for requested bit count");
  return out.slice(0, nbits);
}

std::string BitString::to_string() const {
  std::string s;
  s.reserve(size());
  for (uint8_t b : bits_) s.push_back(b ? '1' : '0');
  return s;
}

std::string BitString::to_hex() const {
  static const char* digits = "0123456789abcdef";
  std::string s;
  for (std::size_t i = 0; i < size(); i += 4) {
    int v = 0;
    for (std::size_t k = 0; k < 4; ++k) {
      v <<= 1;
      if (i + k < size()) v |= bits_[i + k];
    }
    s.push_back(digits[v]);
  }
  return s;
}

BitString BitString::slice(std::size_t pos, std::size_t len) const {
  if (pos + len > size()) fail(errc::invalid_argument, "slice out of range");
  BitString out;
  out.bits_.assign(bits_.begin() + pos, bits_.begin() + pos + len);
  return out;
}

uint64_t BitString::to_uint(std::size_t pos, std::size_t len) const {
  if (len > 64 || pos + len > size()) fail(errc::invalid_argument, "to_uint out of range");
  uint64_t v = 0;
  for (std::size_t k = 0; k < len; ++k) v = (v << 1) | bits_[pos + k];
  return v;
}

BitString BitString::from_uint(uint64_t value, std::size_t nbits) {
  BitString out(nbits);
  for (std::size_t k = 0; k < nbits; ++k) out.set(k, (value >> (nbits - 1 - k)) & 1);
  return out;
}

}  // namespace derand
