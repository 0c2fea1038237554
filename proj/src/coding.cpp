#include "skg/coding.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "skg/rng.hpp"

namespace skg {

ClassModel make_class_model(const CompoundSource& src, const MarginalClass& cls,
                            const AuxChannelPair& aux) {
  if (aux.x_size() != src.x_size())
    throw SpecError("auxiliary channel input size differs from |X|");
  ClassModel m;
  m.class_index = cls.index;
  m.members = cls.members;
  m.aux = aux;
  m.px = cls.x_marginal;
  m.p_uvx = aux_joint(cls.x_marginal, aux);
  m.p_ux = marginalize(m.p_uvx, {0, 2});
  m.p_u = marginal(m.p_uvx, 0);
  m.v_given_u = conditional(marginalize(m.p_uvx, {0, 1}));
  for (int s : cls.members) m.per_state.push_back(aux_joint(src.joint(s), aux));
  return m;
}

namespace {

std::uint64_t size_from_log2(double e, bool& saturated) {
  saturated = false;
  if (e >= 62.0) {
    saturated = true;
    return std::uint64_t{1} << 62;
  }
  double v = std::exp2(e);
  const double r = std::nearbyint(v);
  if (std::abs(v - r) <= 1e-9 * std::max(1.0, v)) v = r;
  const double c = std::ceil(v);
  return c < 1.0 ? 1 : static_cast<std::uint64_t>(c);
}

}  // namespace

CodebookSizes codebook_sizes(const ClassModel& model, int n, double delta) {
  if (n < 1) throw DomainError("codebook_sizes: n must be positive");
  if (!(delta > 0.0)) throw DomainError("codebook_sizes: delta must be positive");
  CodebookSizes cs;
  bool first = true;
  for (const JointPmf& j : model.per_state) {
    const double ux_y = conditional_mutual_information(j, {kAuxU}, {kAuxX}, {kAuxY});
    const double uy = mutual_information(j, {kAuxU}, {kAuxY});
    const double vx_uy = conditional_mutual_information(j, {kAuxV}, {kAuxX}, {kAuxU, kAuxY});
    const double vy_u = conditional_mutual_information(j, {kAuxV}, {kAuxY}, {kAuxU});
    if (first) {
      cs.max_i_ux_given_y = ux_y;
      cs.min_i_uy = uy;
      cs.max_i_vx_given_uy = vx_uy;
      cs.min_i_vy_given_u = vy_u;
      first = false;
    } else {
      cs.max_i_ux_given_y = std::max(cs.max_i_ux_given_y, ux_y);
      cs.min_i_uy = std::min(cs.min_i_uy, uy);
      cs.max_i_vx_given_uy = std::max(cs.max_i_vx_given_uy, vx_uy);
      cs.min_i_vy_given_u = std::min(cs.min_i_vy_given_u, vy_u);
    }
  }
  cs.log2_n1 = n * (cs.max_i_ux_given_y + 3.0 * delta);
  cs.log2_n2 = n * (cs.min_i_uy - 2.0 * delta);
  cs.log2_n3 = n * (cs.max_i_vx_given_uy + 3.0 * delta);
  cs.log2_n4 = n * (cs.min_i_vy_given_u - 2.0 * delta);
  const double* logs[4] = {&cs.log2_n1, &cs.log2_n2, &cs.log2_n3, &cs.log2_n4};
  std::uint64_t* sizes[4] = {&cs.n1, &cs.n2, &cs.n3, &cs.n4};
  for (int k = 0; k < 4; ++k) {
    bool sat = false;
    *sizes[k] = size_from_log2(*logs[k], sat);
    if (sat) cs.warnings.push_back("N" + std::to_string(k + 1) + " saturated at 2^62");
    if (*logs[k] < 0.0)
      cs.warnings.push_back("N" + std::to_string(k + 1) +
                            " clamped to 1: rate term is negative");
  }
  return cs;
}

std::uint64_t codebook_symbol_limit() {
  if (const char* env = std::getenv("SKG_MAX_CODEBOOK_SYMBOLS")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return kDefaultCodebookSymbolLimit;
}

namespace {

void guard_symbols(double codewords, int n, std::uint64_t limit, const char* what) {
  const double symbols = codewords * n;
  if (symbols > static_cast<double>(limit)) {
    std::ostringstream os;
    os << what << " needs " << symbols << " symbols, above the limit of " << limit
       << " (set SKG_MAX_CODEBOOK_SYMBOLS to raise it)";
    throw BudgetError(os.str());
  }
}

}  // namespace

const std::uint64_t* CodebookU::packed(std::uint64_t i, std::uint64_t j) const {
  const std::uint64_t k = (i - 1) * n2 + (j - 1);
  return planes.data() + k * static_cast<std::uint64_t>(u_size) * words();
}

Sequence CodebookU::sequence(std::uint64_t i, std::uint64_t j) const {
  if (i < 1 || i > n1 || j < 1 || j > n2) throw SpecError("CodebookU: index out of range");
  return unpack_sequence(packed(i, j), u_size, n);
}

const std::uint64_t* CodebookV::packed(std::uint64_t i, std::uint64_t j, std::uint64_t p,
                                       std::uint64_t q) const {
  const std::uint64_t k = (((i - 1) * n2 + (j - 1)) * n3 + (p - 1)) * n4 + (q - 1);
  return planes.data() + k * static_cast<std::uint64_t>(v_size) * words_for(n);
}

Sequence CodebookV::sequence(std::uint64_t i, std::uint64_t j, std::uint64_t p,
                             std::uint64_t q) const {
  if (i < 1 || i > n1 || j < 1 || j > n2 || p < 1 || p > n3 || q < 1 || q > n4)
    throw SpecError("CodebookV: index out of range");
  return unpack_sequence(packed(i, j, p, q), v_size, n);
}

CodebookU build_codebook_u(const ClassModel& model, const CodebookSizes& sizes, int n,
                           std::uint64_t seed, std::uint64_t symbol_limit) {
  guard_symbols(static_cast<double>(sizes.n1) * static_cast<double>(sizes.n2), n, symbol_limit,
                "U-codebook");
  CodebookU cb;
  cb.class_index = model.class_index;
  cb.n = n;
  cb.u_size = model.p_u.size();
  cb.n1 = sizes.n1;
  cb.n2 = sizes.n2;
  cb.seed = seed;
  const int words = cb.words();
  const std::uint64_t count = cb.n1 * cb.n2;
  const std::uint64_t stride = static_cast<std::uint64_t>(cb.u_size) * words;
  cb.planes.assign(count * stride, 0);
  CategoricalSampler draw(model.p_u.mass());
  Rng rng(seed);
  for (std::uint64_t k = 0; k < count; ++k) {
    std::uint64_t* base = cb.planes.data() + k * stride;
    for (int t = 0; t < n; ++t) {
      const int u = draw(rng);
      base[u * words + (t >> 6)] |= std::uint64_t{1} << (t & 63);
    }
  }
  return cb;
}

CodebookV build_codebook_v(const ClassModel& model, const CodebookU& cu,
                           const CodebookSizes& sizes, std::uint64_t seed,
                           std::uint64_t symbol_limit) {
  const double count_d = static_cast<double>(cu.n1) * static_cast<double>(cu.n2) *
                         static_cast<double>(sizes.n3) * static_cast<double>(sizes.n4);
  guard_symbols(count_d, cu.n, symbol_limit, "V-codebook");
  CodebookV cb;
  cb.n = cu.n;
  cb.v_size = model.aux.v_size();
  cb.n1 = cu.n1;
  cb.n2 = cu.n2;
  cb.n3 = sizes.n3;
  cb.n4 = sizes.n4;
  cb.seed = seed;
  const int words = words_for(cb.n);
  const std::uint64_t stride = static_cast<std::uint64_t>(cb.v_size) * words;
  const std::uint64_t inner = cb.n3 * cb.n4;
  cb.planes.assign(cu.n1 * cu.n2 * inner * stride, 0);
  std::vector<CategoricalSampler> draw;
  for (int u = 0; u < model.v_given_u.inputs(); ++u)
    draw.emplace_back(model.v_given_u.matrix().row(u).transpose());
  Rng rng(seed);
  std::uint64_t k = 0;
  for (std::uint64_t i = 1; i <= cu.n1; ++i)
    for (std::uint64_t j = 1; j <= cu.n2; ++j) {
      const Sequence u = cu.sequence(i, j);
      for (std::uint64_t l = 0; l < inner; ++l, ++k) {
        std::uint64_t* base = cb.planes.data() + k * stride;
        for (int t = 0; t < cb.n; ++t) {
          const int v = draw[u[t]](rng);
          base[v * words + (t >> 6)] |= std::uint64_t{1} << (t & 63);
        }
      }
    }
  return cb;
}

CodingWindows make_coding_windows(const ClassModel& model, int n, const TypicalityParams& tp) {
  tp.validate();
  CodingWindows w;
  w.n = n;
  w.x_size = model.px.size();
  w.zeta = tp.zeta;
  w.p_ux = model.p_ux;
  w.ux = PackedTypicality(model.p_ux.dims(), make_count_window(model.p_ux.mass(), n, tp.zeta), n);
  w.uvx = PackedTypicality(model.p_uvx.dims(), make_count_window(model.p_uvx.mass(), n, tp.sigma),
                           n);
  const double xs = static_cast<double>(w.x_size);
  for (const JointPmf& j : model.per_state) {
    const JointPmf uy = marginalize(j, {kAuxU, kAuxY});
    const JointPmf uvy = marginalize(j, {kAuxU, kAuxV, kAuxY});
    w.y_size = uy.dim(1);
    w.uy.emplace_back(uy.dims(), make_count_window(uy.mass(), n, tp.sigma * xs), n);
    w.uvy.emplace_back(uvy.dims(), make_count_window(uvy.mass(), n, tp.vartheta * xs), n);
  }
  return w;
}

bool encoder_domain_contains(SeqView x, const CodingWindows& w) {
  const SeqView fixed[1] = {x};
  return joint_section_nonempty(w.p_ux, 0, fixed, w.zeta);
}

EncodeResult encode_uv(SeqView x, const CodingWindows& w, const CodebookU& cu,
                       const CodebookV* cv) {
  if (static_cast<int>(x.size()) != cu.n) throw SpecError("encode_uv: block length mismatch");
  EncodeResult r;
  if (!encoder_domain_contains(x, w)) return r;
  const std::vector<std::uint64_t> xp = pack_sequence(x, w.x_size);
  const std::uint64_t* seqs[3] = {nullptr, xp.data(), nullptr};
  for (std::uint64_t i = 1; i <= cu.n1 && !r.ok(); ++i)
    for (std::uint64_t j = 1; j <= cu.n2; ++j) {
      seqs[0] = cu.packed(i, j);
      if (w.ux(seqs)) {
        r.i = i;
        r.j = j;
        break;
      }
    }
  if (!r.ok() || cv == nullptr) return r;
  seqs[0] = cu.packed(r.i, r.j);
  seqs[2] = xp.data();
  for (std::uint64_t p = 1; p <= cv->n3 && r.p == 0; ++p)
    for (std::uint64_t q = 1; q <= cv->n4; ++q) {
      seqs[1] = cv->packed(r.i, r.j, p, q);
      if (w.uvx(seqs)) {
        r.p = p;
        r.q = q;
        break;
      }
    }
  return r;
}

std::uint64_t count_covering_codewords(SeqView x, const CodingWindows& w, const CodebookU& cu,
                                       std::uint64_t i) {
  if (static_cast<int>(x.size()) != cu.n) throw SpecError("covering count: block length mismatch");
  if (i < 1 || i > cu.n1) throw SpecError("covering count: row index out of range");
  const std::vector<std::uint64_t> xp = pack_sequence(x, w.x_size);
  const std::uint64_t* seqs[2] = {nullptr, xp.data()};
  std::uint64_t count = 0;
  for (std::uint64_t j = 1; j <= cu.n2; ++j) {
    seqs[0] = cu.packed(i, j);
    if (w.ux(seqs)) ++count;
  }
  return count;
}

std::uint64_t decode_g(std::uint64_t i, SeqView y, const CodingWindows& w, const CodebookU& cu) {
  if (i < 1 || i > cu.n1) return 0;
  const std::vector<std::uint64_t> yp = pack_sequence(y, w.y_size);
  const std::uint64_t* seqs[2] = {nullptr, yp.data()};
  std::uint64_t hit = 0;
  for (std::uint64_t j = 1; j <= cu.n2; ++j) {
    seqs[0] = cu.packed(i, j);
    bool in = false;
    for (const auto& t : w.uy)
      if (t(seqs)) {
        in = true;
        break;
      }
    if (!in) continue;
    if (hit != 0) return 0;
    hit = j;
  }
  return hit;
}

std::uint64_t decode_rho(std::uint64_t i, std::uint64_t j, std::uint64_t p, SeqView y,
                         const CodingWindows& w, const CodebookU& cu, const CodebookV& cv) {
  if (i < 1 || i > cu.n1 || j < 1 || j > cu.n2 || p < 1 || p > cv.n3) return 0;
  const std::vector<std::uint64_t> yp = pack_sequence(y, w.y_size);
  const std::uint64_t* seqs[3] = {cu.packed(i, j), nullptr, yp.data()};
  std::uint64_t hit = 0;
  for (std::uint64_t q = 1; q <= cv.n4; ++q) {
    seqs[1] = cv.packed(i, j, p, q);
    bool in = false;
    for (const auto& t : w.uvy)
      if (t(seqs)) {
        in = true;
        break;
      }
    if (!in) continue;
    if (hit != 0) return 0;
    hit = q;
  }
  return hit;
}

}  // namespace skg
