#pragma once

#include <cstdint>
#include <vector>

#include "skg/typicality.hpp"

namespace skg {

// Bit-plane layout: plane a holds bit t iff seq[t] == a. A packed sequence
// over an alphabet of size m occupies m * words_for(n) words.
inline int words_for(int n) { return (n + 63) / 64; }

void pack_sequence(SeqView seq, int alphabet, int words, std::uint64_t* out);
std::vector<std::uint64_t> pack_sequence(SeqView seq, int alphabet);
Sequence unpack_sequence(const std::uint64_t* planes, int alphabet, int n);

// Joint-typicality test on packed sequences against precomputed count
// windows over the product alphabet `dims` (row-major cells).
class PackedTypicality {
 public:
  PackedTypicality() = default;
  PackedTypicality(std::vector<int> dims, CountWindow window, int n);

  bool operator()(const std::uint64_t* const* seqs) const;
  const CountWindow& window() const { return window_; }

 private:
  bool recurse(const std::uint64_t* const* seqs, int level, long prefix,
               const std::uint64_t* acc) const;

  std::vector<int> dims_;
  CountWindow window_;
  int words_ = 0;
  mutable std::vector<std::uint64_t> scratch_;
};

}  // namespace skg
