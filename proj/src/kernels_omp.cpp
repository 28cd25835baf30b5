#include "wdp/kernels.hpp"

#include <cstdint>

namespace wdp::kernels::parallel {

namespace {
// Below this many multiply-adds the fork/join costs more than it saves.
constexpr std::size_t kMinWork = 1 << 14;
}  // namespace

void affine(ConstView x, ConstView w, std::span<const double> b, MutView y) {
  const auto rows = static_cast<std::int64_t>(x.rows);
#pragma omp parallel for schedule(static) if (x.rows * w.rows * w.cols >= kMinWork)
  for (std::int64_t r = 0; r < rows; ++r) {
    const double* xr = x.row(static_cast<std::size_t>(r));
    double* yr = y.row(static_cast<std::size_t>(r));
    for (std::size_t o = 0; o < w.rows; ++o) {
      const double* wo = w.row(o);
      double acc = b[o];
      for (std::size_t i = 0; i < w.cols; ++i) acc += wo[i] * xr[i];
      yr[o] = acc;
    }
  }
}

void affine_grad_params(ConstView x, ConstView dy, MutView dw, std::span<double> db) {
  const auto outs = static_cast<std::int64_t>(dw.rows);
#pragma omp parallel for schedule(static) if (x.rows * dw.rows * dw.cols >= kMinWork)
  for (std::int64_t oi = 0; oi < outs; ++oi) {
    const auto o = static_cast<std::size_t>(oi);
    double* dwo = dw.row(o);
    double bias = 0.0;
    for (std::size_t r = 0; r < x.rows; ++r) {
      const double g = dy.row(r)[o];
      if (g == 0.0) continue;
      bias += g;
      const double* xr = x.row(r);
      for (std::size_t i = 0; i < dw.cols; ++i) dwo[i] += g * xr[i];
    }
    db[o] += bias;
  }
}

void affine_grad_input(ConstView dy, ConstView w, MutView dx) {
  const auto rows = static_cast<std::int64_t>(dy.rows);
#pragma omp parallel for schedule(static) if (dy.rows * w.rows * dx.cols >= kMinWork)
  for (std::int64_t ri = 0; ri < rows; ++ri) {
    const auto r = static_cast<std::size_t>(ri);
    const double* gr = dy.row(r);
    double* dxr = dx.row(r);
    for (std::size_t i = 0; i < dx.cols; ++i) dxr[i] = 0.0;
    for (std::size_t o = 0; o < w.rows; ++o) {
      const double g = gr[o];
      if (g == 0.0) continue;
      const double* wo = w.row(o);
      for (std::size_t i = 0; i < dx.cols; ++i) dxr[i] += g * wo[i];
    }
  }
}

void relu(MutView x) {
  const auto n = static_cast<std::int64_t>(x.rows * x.cols);
#pragma omp parallel for schedule(static) if (x.rows * x.cols >= kMinWork)
  for (std::int64_t i = 0; i < n; ++i)
    if (x.data[i] < 0.0) x.data[i] = 0.0;
}

void relu_grad(ConstView pre, MutView dy) {
  const auto n = static_cast<std::int64_t>(pre.rows * pre.cols);
#pragma omp parallel for schedule(static) if (pre.rows * pre.cols >= kMinWork)
  for (std::int64_t i = 0; i < n; ++i)
    if (pre.data[i] <= 0.0) dy.data[i] = 0.0;
}

void gather_rows(ConstView src, std::span<const std::size_t> index, MutView dst, std::size_t col) {
  const auto rows = static_cast<std::int64_t>(index.size());
#pragma omp parallel for schedule(static) if (index.size() * src.cols >= kMinWork)
  for (std::int64_t ri = 0; ri < rows; ++ri) {
    const auto r = static_cast<std::size_t>(ri);
    const double* s = src.row(index[r]);
    double* d = dst.row(r) + col;
    for (std::size_t c = 0; c < src.cols; ++c) d[c] = s[c];
  }
}

void segment_sum(ConstView src, std::size_t col, Segments seg, MutView dst, bool accumulate) {
  const auto groups = static_cast<std::int64_t>(seg.groups());
  const std::size_t work = seg.index.size() * dst.cols;
#pragma omp parallel for schedule(dynamic, 16) if (work >= kMinWork)
  for (std::int64_t gi = 0; gi < groups; ++gi) {
    const auto g = static_cast<std::size_t>(gi);
    double* d = dst.row(g);
    if (!accumulate)
      for (std::size_t c = 0; c < dst.cols; ++c) d[c] = 0.0;
    for (std::size_t k = seg.offset[g]; k < seg.offset[g + 1]; ++k) {
      const double* s = src.row(seg.index[k]) + col;
      for (std::size_t c = 0; c < dst.cols; ++c) d[c] += s[c];
    }
  }
}

}  // namespace wdp::kernels::parallel
