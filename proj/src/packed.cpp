#include "skg/packed.hpp"

#include <algorithm>
#include <bit>

namespace skg {

void pack_sequence(SeqView seq, int alphabet, int words, std::uint64_t* out) {
  std::fill(out, out + static_cast<long>(alphabet) * words, std::uint64_t{0});
  for (std::size_t t = 0; t < seq.size(); ++t) {
    const int a = seq[t];
    if (a >= alphabet) throw SpecError("pack_sequence: symbol outside alphabet");
    out[a * words + (t >> 6)] |= std::uint64_t{1} << (t & 63);
  }
}

std::vector<std::uint64_t> pack_sequence(SeqView seq, int alphabet) {
  const int words = words_for(static_cast<int>(seq.size()));
  std::vector<std::uint64_t> out(static_cast<std::size_t>(alphabet) * words);
  pack_sequence(seq, alphabet, words, out.data());
  return out;
}

Sequence unpack_sequence(const std::uint64_t* planes, int alphabet, int n) {
  const int words = words_for(n);
  Sequence s(n, 0);
  for (int a = 0; a < alphabet; ++a)
    for (int t = 0; t < n; ++t)
      if ((planes[a * words + (t >> 6)] >> (t & 63)) & 1U) s[t] = static_cast<Symbol>(a);
  return s;
}

PackedTypicality::PackedTypicality(std::vector<int> dims, CountWindow window, int n)
    : dims_(std::move(dims)), window_(std::move(window)), words_(words_for(n)) {
  scratch_.assign(dims_.size() * static_cast<std::size_t>(words_), 0);
}

bool PackedTypicality::operator()(const std::uint64_t* const* seqs) const {
  return recurse(seqs, 0, 0, nullptr);
}

bool PackedTypicality::recurse(const std::uint64_t* const* seqs, int level, long prefix,
                               const std::uint64_t* acc) const {
  const bool last = level + 1 == static_cast<int>(dims_.size());
  std::uint64_t* buf = scratch_.data() + static_cast<long>(level) * words_;
  for (int a = 0; a < dims_[level]; ++a) {
    const std::uint64_t* plane = seqs[level] + static_cast<long>(a) * words_;
    const long cell = prefix * dims_[level] + a;
    if (last) {
      long c = 0;
      if (acc)
        for (int w = 0; w < words_; ++w) c += std::popcount(acc[w] & plane[w]);
      else
        for (int w = 0; w < words_; ++w) c += std::popcount(plane[w]);
      if (!window_.admits(cell, c)) return false;
    } else {
      if (acc)
        for (int w = 0; w < words_; ++w) buf[w] = acc[w] & plane[w];
      else
        std::copy(plane, plane + words_, buf);
      if (!recurse(seqs, level + 1, cell, buf)) return false;
    }
  }
  return true;
}

}  // namespace skg
