#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "skg/aux_channels.hpp"
#include "skg/packed.hpp"

namespace skg {

// Joints derived from one marginal class and its auxiliary channels.
struct ClassModel {
  int class_index = 0;
  std::vector<int> members;
  AuxChannelPair aux;
  Pmf px;
  JointPmf p_ux;            // (U,X)
  JointPmf p_uvx;           // (U,V,X)
  Pmf p_u;
  Channel v_given_u;        // |U| x |V|
  std::vector<JointPmf> per_state;  // rank-5 (U,V,X,Y,Z), one per member
};

ClassModel make_class_model(const CompoundSource& src, const MarginalClass& cls,
                            const AuxChannelPair& aux);

struct CodebookSizes {
  // Informational terms over the class members.
  double max_i_ux_given_y = 0.0;   // max_s I(U;X|Y_s)
  double min_i_uy = 0.0;           // min_s I(U;Y_s)
  double max_i_vx_given_uy = 0.0;  // max_s I(V;X|U,Y_s)
  double min_i_vy_given_u = 0.0;   // min_s I(V;Y_s|U)
  // log2 of the unrounded sizes.
  double log2_n1 = 0.0, log2_n2 = 0.0, log2_n3 = 0.0, log2_n4 = 0.0;
  std::uint64_t n1 = 1, n2 = 1, n3 = 1, n4 = 1;
  std::vector<std::string> warnings;
};

CodebookSizes codebook_sizes(const ClassModel& model, int n, double delta);

// Default limit on stored codebook symbols; SKG_MAX_CODEBOOK_SYMBOLS overrides.
inline constexpr std::uint64_t kDefaultCodebookSymbolLimit = std::uint64_t{1} << 30;
std::uint64_t codebook_symbol_limit();

// U-codewords u_ij, i in 1..N1, j in 1..N2, i.i.d. from P_U^n.
class CodebookU {
 public:
  int class_index = 0;
  int n = 0;
  int u_size = 0;
  std::uint64_t n1 = 0, n2 = 0;
  std::uint64_t seed = 0;

  const std::uint64_t* packed(std::uint64_t i, std::uint64_t j) const;
  Sequence sequence(std::uint64_t i, std::uint64_t j) const;
  int words() const { return words_for(n); }

  std::vector<std::uint64_t> planes;
};

// V-codewords v^{ij}_pq drawn position-wise from P_{V|U}(.|u_ij).
class CodebookV {
 public:
  int n = 0;
  int v_size = 0;
  std::uint64_t n1 = 0, n2 = 0, n3 = 0, n4 = 0;
  std::uint64_t seed = 0;

  const std::uint64_t* packed(std::uint64_t i, std::uint64_t j, std::uint64_t p,
                              std::uint64_t q) const;
  Sequence sequence(std::uint64_t i, std::uint64_t j, std::uint64_t p, std::uint64_t q) const;

  std::vector<std::uint64_t> planes;
};

CodebookU build_codebook_u(const ClassModel& model, const CodebookSizes& sizes, int n,
                           std::uint64_t seed,
                           std::uint64_t symbol_limit = codebook_symbol_limit());
CodebookV build_codebook_v(const ClassModel& model, const CodebookU& cu,
                           const CodebookSizes& sizes, std::uint64_t seed,
                           std::uint64_t symbol_limit = codebook_symbol_limit());

// Count windows for every typicality test the coder performs at block length n.
struct CodingWindows {
  int n = 0;
  PackedTypicality ux;                // (U,X) at zeta: encoder layer a
  PackedTypicality uvx;               // (U,V,X) at sigma: encoder layer b
  std::vector<PackedTypicality> uy;   // (U,Y_s) at sigma|X|: decoder g
  std::vector<PackedTypicality> uvy;  // (U,V,Y_s) at vartheta|X|: decoder rho
  JointPmf p_ux;
  double zeta = 0.0;
  int x_size = 0, y_size = 0;
};

CodingWindows make_coding_windows(const ClassModel& model, int n, const TypicalityParams& tp);

// Indices are 1-based; 0 is the failure sentinel.
struct EncodeResult {
  std::uint64_t i = 0, j = 0, p = 0, q = 0;
  bool ok() const { return i != 0; }
};

// Is T[UX]_zeta(x^n) nonempty, i.e. is x^n in the encoder's domain?
bool encoder_domain_contains(SeqView x, const CodingWindows& w);

// First (i,j) in row-major order with (u_ij, x) in T[UX]_zeta; with a
// V-codebook also the first (p,q) with (u_ij, v^{ij}_pq, x) in T[UVX]_sigma.
EncodeResult encode_uv(SeqView x, const CodingWindows& w, const CodebookU& cu,
                       const CodebookV* cv = nullptr);

// Number of j with (u_ij, x) in T[UX]_zeta.
std::uint64_t count_covering_codewords(SeqView x, const CodingWindows& w, const CodebookU& cu,
                                       std::uint64_t i);

// Unique j with u_ij in the union over members s of T[UY,s]_{sigma|X|}(y), else 0.
std::uint64_t decode_g(std::uint64_t i, SeqView y, const CodingWindows& w, const CodebookU& cu);

// Unique q with (u_ij, v^{ij}_pq, y) in some T[UVY,s]_{vartheta|X|}, else 0.
std::uint64_t decode_rho(std::uint64_t i, std::uint64_t j, std::uint64_t p, SeqView y,
                         const CodingWindows& w, const CodebookU& cu, const CodebookV& cv);

}  // namespace skg
