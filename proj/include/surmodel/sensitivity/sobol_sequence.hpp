#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "surmodel/core/random.hpp"

namespace surmodel::sensitivity {

/// Primitive polynomial data for dimensions 2..8 (Joe & Kuo, new-joe-kuo-6.21201).
/// Dimension 1 is the van der Corput sequence.
struct DirectionEntry {
  unsigned s;
  unsigned a;
  std::array<std::uint32_t, 5> m;
};

inline constexpr std::array<DirectionEntry, 7> kDirectionTable{{
    {1, 0, {1, 0, 0, 0, 0}},
    {2, 1, {1, 3, 0, 0, 0}},
    {3, 1, {1, 3, 1, 0, 0}},
    {3, 2, {1, 1, 1, 0, 0}},
    {4, 1, {1, 1, 3, 3, 0}},
    {4, 4, {1, 3, 5, 13, 0}},
    {5, 2, {1, 1, 5, 5, 17}},
}};

inline constexpr unsigned kSobolBits = 32;
inline constexpr std::size_t kSobolMaxDimension = kDirectionTable.size() + 1;

/// Gray-code Sobol generator in [0,1)^dim, starting at the origin. An
/// optional per-dimension XOR digital shift randomizes the net while keeping
/// its stratification.
class SobolSequence {
 public:
  explicit SobolSequence(std::size_t dim, std::uint64_t scramble_seed = 0, bool scramble = false)
      : dim_(dim), v_(dim), x_(dim, 0), shift_(dim, 0) {
    if (dim < 1 || dim > kSobolMaxDimension)
      throw std::invalid_argument("Sobol dimension must be in 1.." + std::to_string(kSobolMaxDimension));
    for (unsigned k = 0; k < kSobolBits; ++k) v_[0][k] = 1u << (31 - k);
    for (std::size_t d = 1; d < dim; ++d) {
      const auto& e = kDirectionTable[d - 1];
      auto& v = v_[d];
      for (unsigned k = 0; k < e.s; ++k) v[k] = e.m[k] << (31 - k);
      for (unsigned k = e.s; k < kSobolBits; ++k) {
        std::uint32_t w = v[k - e.s] ^ (v[k - e.s] >> e.s);
        for (unsigned i = 1; i < e.s; ++i)
          if ((e.a >> (e.s - 1 - i)) & 1u) w ^= v[k - i];
        v[k] = w;
      }
    }
    if (scramble) {
      Rng rng(scramble_seed);
      for (auto& s : shift_) s = static_cast<std::uint32_t>(rng() >> 32);
    }
  }

  [[nodiscard]] std::size_t dimension() const { return dim_; }

  /// Next point; the first call returns the (shifted) origin.
  std::vector<double> next() {
    if (index_ > 0xffffffffULL) throw std::out_of_range("Sobol sequence exhausted");
    std::vector<double> out(dim_);
    if (index_ > 0) {
      const unsigned c = rightmost_zero(index_ - 1);
      for (std::size_t d = 0; d < dim_; ++d) x_[d] ^= v_[d][c];
    }
    for (std::size_t d = 0; d < dim_; ++d) out[d] = static_cast<double>(x_[d] ^ shift_[d]) * 0x1.0p-32;
    ++index_;
    return out;
  }

 private:
  static unsigned rightmost_zero(std::uint64_t n) {
    unsigned c = 0;
    while (n & 1u) {
      n >>= 1;
      ++c;
    }
    return c;
  }

  std::size_t dim_;
  std::vector<std::array<std::uint32_t, kSobolBits>> v_;
  std::vector<std::uint32_t> x_;
  std::vector<std::uint32_t> shift_;
  std::uint64_t index_ = 0;
};

}  // namespace surmodel::sensitivity
