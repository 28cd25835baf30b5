#include <gtest/gtest.h>

#include <vector>

#include "wdp/kernels.hpp"
#include "wdp/rng.hpp"

using namespace wdp;
using namespace wdp::kernels;

namespace {

struct Buf {
  std::vector<double> d;
  std::size_t rows, cols;
  Buf(std::size_t r, std::size_t c, Rng* rng = nullptr) : d(r * c, 0.0), rows(r), cols(c) {
    if (rng)
      for (auto& v : d) v = rng->uniform() * 2.0 - 1.0;
  }
  ConstView cv() const { return {d.data(), rows, cols}; }
  MutView mv() { return {d.data(), rows, cols}; }
  double at(std::size_t r, std::size_t c) const { return d[r * cols + c]; }
};

// Sizes large enough that the parallel versions actually split work.
constexpr std::size_t kRows = 257, kIn = 48, kOut = 16;

}  // namespace

TEST(Kernels, AffineMatchesNaiveAndParallel) {
  Rng rng(1);
  Buf x(kRows, kIn, &rng), w(kOut, kIn, &rng), b(1, kOut, &rng);
  Buf ys(kRows, kOut), yp(kRows, kOut);
  serial::affine(x.cv(), w.cv(), b.d, ys.mv());
  parallel::affine(x.cv(), w.cv(), b.d, yp.mv());
  EXPECT_EQ(ys.d, yp.d);
  for (std::size_t r = 0; r < kRows; r += 17)
    for (std::size_t o = 0; o < kOut; ++o) {
      double s = b.d[o];
      for (std::size_t i = 0; i < kIn; ++i) s += x.at(r, i) * w.at(o, i);
      EXPECT_NEAR(ys.at(r, o), s, 1e-12);
    }
}

TEST(Kernels, AffineGradients) {
  Rng rng(2);
  Buf x(kRows, kIn, &rng), w(kOut, kIn, &rng), dy(kRows, kOut, &rng);
  Buf dws(kOut, kIn), dwp(kOut, kIn), dbs(1, kOut), dbp(1, kOut);
  serial::affine_grad_params(x.cv(), dy.cv(), dws.mv(), dbs.d);
  parallel::affine_grad_params(x.cv(), dy.cv(), dwp.mv(), dbp.d);
  EXPECT_EQ(dws.d, dwp.d);
  EXPECT_EQ(dbs.d, dbp.d);
  double s = 0.0, sb = 0.0;
  for (std::size_t r = 0; r < kRows; ++r) {
    s += dy.at(r, 3) * x.at(r, 5);
    sb += dy.at(r, 3);
  }
  EXPECT_NEAR(dws.at(3, 5), s, 1e-10);
  EXPECT_NEAR(dbs.d[3], sb, 1e-10);

  Buf dxs(kRows, kIn), dxp(kRows, kIn);
  serial::affine_grad_input(dy.cv(), w.cv(), dxs.mv());
  parallel::affine_grad_input(dy.cv(), w.cv(), dxp.mv());
  EXPECT_EQ(dxs.d, dxp.d);
  double t = 0.0;
  for (std::size_t o = 0; o < kOut; ++o) t += dy.at(7, o) * w.at(o, 9);
  EXPECT_NEAR(dxs.at(7, 9), t, 1e-12);
}

TEST(Kernels, ReluAndMask) {
  Rng rng(3);
  Buf a(kRows, kOut, &rng);
  Buf s = a, p = a;
  serial::relu(s.mv());
  parallel::relu(p.mv());
  EXPECT_EQ(s.d, p.d);
  for (std::size_t i = 0; i < a.d.size(); ++i) EXPECT_EQ(s.d[i], a.d[i] > 0 ? a.d[i] : 0.0);

  Buf g(kRows, kOut, &rng);
  Buf gs = g, gp = g;
  serial::relu_grad(a.cv(), gs.mv());
  parallel::relu_grad(a.cv(), gp.mv());
  EXPECT_EQ(gs.d, gp.d);
  for (std::size_t i = 0; i < g.d.size(); ++i) EXPECT_EQ(gs.d[i], a.d[i] > 0 ? g.d[i] : 0.0);
}

TEST(Kernels, GatherAndSegmentSum) {
  Rng rng(4);
  Buf src(40, 8, &rng);
  std::vector<std::size_t> index(kRows);
  for (auto& i : index) i = rng.index(40);
  Buf gs(kRows, 24), gp(kRows, 24);
  serial::gather_rows(src.cv(), index, gs.mv(), 8);
  parallel::gather_rows(src.cv(), index, gp.mv(), 8);
  EXPECT_EQ(gs.d, gp.d);
  for (std::size_t r = 0; r < kRows; ++r) {
    EXPECT_EQ(gs.at(r, 8), src.at(index[r], 0));
    EXPECT_EQ(gs.at(r, 0), 0.0);
  }

  // random groups, including empty ones
  std::vector<std::size_t> offset{0};
  std::vector<std::size_t> members;
  for (std::size_t g = 0; g < 60; ++g) {
    const auto k = rng.index(7);
    for (std::size_t j = 0; j < k; ++j) members.push_back(rng.index(kRows));
    offset.push_back(members.size());
  }
  Buf edges(kRows, 16, &rng);
  Segments seg{offset, members};
  Buf ss(60, 8), sp(60, 8);
  serial::segment_sum(edges.cv(), 4, seg, ss.mv(), false);
  parallel::segment_sum(edges.cv(), 4, seg, sp.mv(), false);
  EXPECT_EQ(ss.d, sp.d);
  for (std::size_t g = 0; g < 60; ++g)
    for (std::size_t c = 0; c < 8; ++c) {
      double s = 0.0;
      for (std::size_t k = offset[g]; k < offset[g + 1]; ++k) s += edges.at(members[k], 4 + c);
      EXPECT_NEAR(ss.at(g, c), s, 1e-12);
    }
  Buf before = ss;
  serial::segment_sum(edges.cv(), 4, seg, ss.mv(), true);
  parallel::segment_sum(edges.cv(), 4, seg, sp.mv(), true);
  EXPECT_EQ(ss.d, sp.d);
  for (std::size_t i = 0; i < ss.d.size(); ++i) EXPECT_NEAR(ss.d[i], 2.0 * before.d[i], 1e-12);
}
