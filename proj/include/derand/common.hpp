// Copyright 2026 the derand authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DERAND_COMMON_HPP
#define DERAND_COMMON_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace derand {

/// Error categories surfaced through the C API as status codes.
enum class errc {
  invalid_argument,  // bad operand (dimension mismatch, out-of-range index)
  parse,             // malformed text input
  validation,        // structural violation (cycle, dangling edge, discipline)
  resource,          // enumeration cap exceeded
  config,            // inconsistent or missing configuration
  divergence,        // non-absorbing chain / iteration cap hit
  internal,
};

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

// ---------------------------------------------------------------------------
// Bit strings

/// A sequence of bits, index 0 = leftmost. The serialized formats use 1-based
/// indices; conversion happens at those boundaries only.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t n, int fill = 0) : bits_(n, static_cast<uint8_t>(fill != 0)) {}

  static BitString from_string(const std::string& s);
  static BitString from_hex(const std::string& hex, std::size_t nbits);
  std::string to_string() const;
  std::string to_hex() const;  // 4 bits per nibble, bit 0 is the high bit of nibble 0

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  int operator[](std::size_t i) const { return bits_[i]; }
  void set(std::size_t i, int b) { bits_[i] = static_cast<uint8_t>(b != 0); }
  void push_back(int b) { bits_.push_back(static_cast<uint8_t>(b != 0)); }
  void append(const BitString& other) { bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end()); }
  BitString slice(std::size_t pos, std::size_t len) const;

  /// Interprets bits [pos, pos+len) as an unsigned integer, bit pos most significant.
  uint64_t to_uint(std::size_t pos, std::size_t len) const;
  static BitString from_uint(uint64_t value, std::size_t nbits);

  bool operator==(const BitString& o) const { return bits_ == o.bits_; }
  bool operator!=(const BitString& o) const { return bits_ != o.bits_; }

 private:
  std::vector<uint8_t> bits_;
};

// ---------------------------------------------------------------------------
// Deterministic randomness for tests and Monte-Carlo experiments

struct SplitMix64 {
  uint64_t state = 0;
  explicit SplitMix64(uint64_t seed = 0) : state(seed) {}
  uint64_t next() {
    state += 0x9E3779B97F4A7C15ull;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  /// Uniform in [0, bound), bound >= 1, by rejection.
  uint64_t below(uint64_t bound) {
    if (bound == 0) fail(errc::invalid_argument, "below(0)");
    uint64_t mask = ~0ull;
    if (bound > 1) {
      unsigned bits = 64u - static_cast<unsigned>(__builtin_clzll(bound - 1));
      mask = (bits >= 64) ? ~0ull : ((1ull << bits) - 1);
    } else {
      return 0;
    }
    for (;;) {
      uint64_t v = next() & mask;
      if (v < bound) return v;
    }
  }
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

/// Derives an independent per-trial seed from a master seed.
inline uint64_t trial_seed(uint64_t master, uint64_t trial) {
  SplitMix64 g(master ^ (0xD1B54A32D192ED03ull * (trial + 1)));
  g.next();
  return g.next();
}

// ---------------------------------------------------------------------------
// One-way bit streams (the random tape: readable left to right only)

class BitStream {
 public:
  virtual ~BitStream() = default;
  virtual int next_bit() = 0;
  uint64_t bits_consumed() const { return consumed_; }
  BitString take(std::size_t n) {
    BitString out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(next_bit());
    return out;
  }

 protected:
  uint64_t consumed_ = 0;
};

/// Pseudorandom stream; used for Monte-Carlo trials.
class SeededBitStream final : public BitStream {
 public:
  explicit SeededBitStream(uint64_t seed) : gen_(seed) {}
  int next_bit() override {
    if (avail_ == 0) {
      word_ = gen_.next();
      avail_ = 64;
    }
    int b = static_cast<int>(word_ & 1);
    word_ >>= 1;
    --avail_;
    ++consumed_;
    return b;
  }

 private:
  SplitMix64 gen_;
  uint64_t word_ = 0;
  int avail_ = 0;
};

/// Stream backed by an explicit bit vector; throws when exhausted. Used by
/// exact-enumeration tests that sweep every possible tape.
class FixedBitStream final : public BitStream {
 public:
  explicit FixedBitStream(BitString bits) : bits_(std::move(bits)) {}
  int next_bit() override {
    if (pos_ >= bits_.size()) fail(errc::resource, "random bit stream exhausted");
    ++consumed_;
    return bits_[pos_++];
  }

 private:
  BitString bits_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------

inline int ceil_log2(uint64_t v) {
  if (v <= 1) return 0;
  int k = 0;
  uint64_t p = 1;
  while (p < v) {
    p <<= 1;
    ++k;
    if (k >= 64) break;
  }
  return k;
}

inline uint64_t ceil_div(uint64_t a, uint64_t b) { return (a + b - 1) / b; }

}  // namespace derand

#endif  // DERAND_COMMON_HPP
