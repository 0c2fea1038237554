#include "skg/protocol_instance.hpp"

#include <cmath>

#include "skg/rng.hpp"

namespace skg {

ProtocolInstance::ProtocolInstance(const CompoundSource& src, InstanceConfig cfg)
    : src_(&src), cfg_(std::move(cfg)), classes_(marginal_partition(src)) {
  if (cfg_.n < 1) throw DomainError("protocol: n must be positive");
  if (cfg_.key_size < 1) throw DomainError("protocol: key size must be positive");
  if (cfg_.aux.size() != classes_.size())
    throw SpecError("protocol: need one auxiliary channel pair per marginal class (" +
                    std::to_string(classes_.size()) + ")");
  cfg_.typicality.validate();
  for (std::size_t c = 0; c < classes_.size(); ++c) {
    ClassSetup s;
    s.model = make_class_model(src, classes_[c], cfg_.aux[c]);
    s.sizes = codebook_sizes(s.model, cfg_.n, cfg_.delta);
    s.windows = make_coding_windows(s.model, cfg_.n, cfg_.typicality);
    s.cu = build_codebook_u(s.model, s.sizes, cfg_.n,
                            derive_seed(cfg_.master_seed, 2 * c, StreamTag::kCodebook),
                            cfg_.symbol_limit);
    std::uint64_t domain = s.sizes.n2 + 1;
    if (cfg_.layer == Layer::kAB) {
      s.cv = build_codebook_v(s.model, s.cu, s.sizes,
                              derive_seed(cfg_.master_seed, 2 * c + 1, StreamTag::kCodebook),
                              cfg_.symbol_limit);
      domain = s.sizes.n4 + 1;
    }
    s.kappa = draw_extractor(domain, cfg_.key_size,
                             derive_seed(cfg_.master_seed, c, StreamTag::kExtractor));
    setups_.push_back(std::move(s));
  }
}

AliceOutput ProtocolInstance::alice(SeqView x) const {
  AliceOutput a;
  try {
    a.cls = estimate_marginal(x, classes_).estimated_class;
  } catch (const NoAdmissibleClass&) {
    return a;
  }
  a.estimated = true;
  const ClassSetup& s = setups_[a.cls];
  a.enc = encode_uv(x, s.windows, s.cu, s.cv ? &*s.cv : nullptr);
  a.cr = cfg_.layer == Layer::kA ? a.enc.j : a.enc.q;
  a.extracted = s.kappa(a.cr);
  a.key = a.cr != 0 ? a.extracted : 0;
  return a;
}

BobOutput ProtocolInstance::bob(const AliceOutput& pub, SeqView y) const {
  BobOutput b;
  if (!pub.estimated || pub.enc.i == 0) return b;
  const ClassSetup& s = setups_[pub.cls];
  b.j = decode_g(pub.enc.i, y, s.windows, s.cu);
  if (cfg_.layer == Layer::kA) {
    b.cr = b.j;
  } else {
    if (b.j != 0 && pub.enc.p != 0)
      b.q = decode_rho(pub.enc.i, b.j, pub.enc.p, y, s.windows, s.cu, *s.cv);
    b.cr = b.q;
  }
  b.key = b.cr != 0 ? s.kappa(b.cr) : 0;
  return b;
}

double ProtocolInstance::public_rate() const {
  double best = 0.0;
  for (const auto& s : setups_) {
    double l = std::log2(static_cast<double>(s.sizes.n1));
    if (cfg_.layer == Layer::kAB) l += std::log2(static_cast<double>(s.sizes.n3));
    best = std::max(best, l);
  }
  return (best + std::log2(static_cast<double>(classes_.size()))) / cfg_.n;
}

}  // namespace skg
