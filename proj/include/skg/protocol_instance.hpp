#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "skg/coding.hpp"
#include "skg/estimation.hpp"
#include "skg/extraction.hpp"

namespace skg {

enum class Layer { kA, kAB };

struct InstanceConfig {
  int n = 0;
  double delta = 0.0;
  TypicalityParams typicality;
  Layer layer = Layer::kA;
  std::vector<AuxChannelPair> aux;  // one per marginal class
  int key_size = 2;
  std::uint64_t master_seed = 0;
  std::uint64_t symbol_limit = codebook_symbol_limit();
};

struct ClassSetup {
  ClassModel model;
  CodebookSizes sizes;
  CodingWindows windows;
  CodebookU cu;
  std::optional<CodebookV> cv;
  KeyExtractor kappa;  // over the common-randomness index, sentinel 0 included
};

// Alice's view of one block. `key` is 0 when she has no key.
struct AliceOutput {
  bool estimated = false;
  int cls = -1;
  EncodeResult enc;
  std::uint64_t cr = 0;    // j for layer a, q for layers a+b
  int extracted = 0;       // kappa(cr), always a real key value
  int key = 0;
};

struct BobOutput {
  std::uint64_t j = 0;
  std::uint64_t q = 0;
  std::uint64_t cr = 0;
  int key = 0;
};

// Everything fixed before the first block: class partition, per-class
// codebooks and extractors. Codebook and extractor draws use streams
// derived from the master seed and the class index.
class ProtocolInstance {
 public:
  ProtocolInstance(const CompoundSource& src, InstanceConfig cfg);

  const CompoundSource& source() const { return *src_; }
  const InstanceConfig& config() const { return cfg_; }
  const std::vector<MarginalClass>& classes() const { return classes_; }
  const ClassSetup& setup(int cls) const { return setups_[cls]; }
  int key_size() const { return cfg_.key_size; }

  AliceOutput alice(SeqView x) const;
  BobOutput bob(const AliceOutput& public_view, SeqView y) const;

  // (1/n) log2 of the public message range: max_c N1 [* N3] times |classes|.
  double public_rate() const;

 private:
  const CompoundSource* src_;
  InstanceConfig cfg_;
  std::vector<MarginalClass> classes_;
  std::vector<ClassSetup> setups_;
};

}  // namespace skg
