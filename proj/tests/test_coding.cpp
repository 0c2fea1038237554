#include <cmath>

#include "doctest.h"
#include "skg/errors.hpp"
#include "skg/protocol_instance.hpp"
#include "skg/rng.hpp"

using namespace skg;

namespace {

// X uniform, Y = X, Z trivial.
CompoundSource clean_source() {
  return CompoundSource(Alphabet(2), Alphabet(2), Alphabet(1), {"s"},
                        {JointPmf({2, 2, 1}, Eigen::Vector4d(0.5, 0.0, 0.0, 0.5))});
}

Channel bsc(double a) {
  Eigen::Matrix2d w;
  w << 1 - a, a, a, 1 - a;
  return Channel(w);
}

const TypicalityParams kTp{0.02, 0.05, 0.08, 0.1};

}  // namespace

TEST_CASE("codebook sizes follow the rate terms") {
  const CompoundSource src = clean_source();
  const auto classes = marginal_partition(src);
  const ClassModel m = make_class_model(src, classes[0], AuxChannelPair::single_layer(bsc(0.25)));
  const CodebookSizes s = codebook_sizes(m, 24, 0.01);
  const double i_ux = 1.0 - binary_entropy(0.25);
  CHECK(s.max_i_ux_given_y == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(s.min_i_uy == doctest::Approx(i_ux).epsilon(1e-12));
  CHECK(s.n1 == static_cast<std::uint64_t>(std::ceil(std::exp2(24 * 0.03))));
  CHECK(s.n2 == static_cast<std::uint64_t>(std::ceil(std::exp2(24 * (i_ux - 0.02)))));
  CHECK(s.n1 == 2);
  CHECK(s.n2 == 17);
  CHECK_THROWS_AS(codebook_sizes(m, 0, 0.01), DomainError);
}

TEST_CASE("codebook draws are reproducible and guarded") {
  const CompoundSource src = clean_source();
  const ClassModel m =
      make_class_model(src, marginal_partition(src)[0], AuxChannelPair::single_layer(bsc(0.25)));
  CodebookSizes s;
  s.n1 = 3;
  s.n2 = 50;
  const CodebookU a = build_codebook_u(m, s, 40, 5);
  const CodebookU b = build_codebook_u(m, s, 40, 5);
  const CodebookU c = build_codebook_u(m, s, 40, 6);
  CHECK(a.planes == b.planes);
  CHECK(a.planes != c.planes);
  long ones = 0;
  for (std::uint64_t i = 1; i <= 3; ++i)
    for (std::uint64_t j = 1; j <= 50; ++j)
      for (Symbol u : a.sequence(i, j)) ones += u;
  CHECK(ones / 6000.0 == doctest::Approx(0.5).epsilon(0.1));
  CHECK_THROWS_AS(build_codebook_u(m, s, 40, 5, 1000), BudgetError);
}

TEST_CASE("encoder takes the first covering codeword in row-major order") {
  const CompoundSource src = clean_source();
  const ClassModel m =
      make_class_model(src, marginal_partition(src)[0], AuxChannelPair::single_layer(bsc(0.25)));
  const int n = 24;
  const CodebookSizes s = codebook_sizes(m, n, 0.01);
  const CodingWindows w = make_coding_windows(m, n, kTp);
  int encoded = 0;
  for (int t = 0; t < 40; ++t) {
    const CodebookU cu = build_codebook_u(m, s, n, derive_seed(1, t, StreamTag::kCodebook));
    const SampleBlock blk = sample_block(src, 0, n, derive_seed(2, t, StreamTag::kSource));
    EncodeResult want;
    std::uint64_t count_row1 = 0;
    for (std::uint64_t i = 1; i <= cu.n1; ++i)
      for (std::uint64_t j = 1; j <= cu.n2; ++j) {
        const Sequence u = cu.sequence(i, j);
        const SeqView both[] = {u, blk.x};
        if (!is_jointly_typical(both, m.p_ux, kTp.zeta)) continue;
        if (i == 1) ++count_row1;
        if (!want.ok()) want = {i, j, 0, 0};
      }
    const EncodeResult got = encode_uv(blk.x, w, cu);
    CHECK(got.i == want.i);
    CHECK(got.j == want.j);
    CHECK(count_covering_codewords(blk.x, w, cu, 1) == count_row1);
    encoded += got.ok();
  }
  CHECK(encoded > 0);
}

TEST_CASE("with Y = X Bob never decodes a wrong key") {
  const CompoundSource src = clean_source();
  InstanceConfig cfg;
  cfg.n = 24;
  // Many rows, two codewords per row and exact-type windows: N1 = 55, N2 = 2.
  cfg.delta = 0.08;
  cfg.typicality = {0.005, 0.01, 0.015, 0.02};
  cfg.aux = {AuxChannelPair::single_layer(bsc(0.25))};
  cfg.key_size = 4;
  cfg.master_seed = 3;
  const ProtocolInstance inst(src, cfg);
  int agreed = 0;
  for (int t = 0; t < 2000; ++t) {
    const SampleBlock blk = sample_block(src, 0, cfg.n, derive_seed(4, t, StreamTag::kSource));
    const AliceOutput a = inst.alice(blk.x);
    const BobOutput b = inst.bob(a, blk.y);
    if (a.key != 0) {
      CHECK((b.key == 0 || b.key == a.key));
      agreed += b.key == a.key;
    }
  }
  CHECK(inst.setup(0).sizes.n2 == 2);
  CHECK(agreed > 0);
}
