#include "wdp/kernels.hpp"

namespace wdp::kernels::serial {

void affine(ConstView x, ConstView w, std::span<const double> b, MutView y) {
  for (std::size_t r = 0; r < x.rows; ++r) {
    const double* xr = x.row(r);
    double* yr = y.row(r);
    for (std::size_t o = 0; o < w.rows; ++o) {
      const double* wo = w.row(o);
      double acc = b[o];
      for (std::size_t i = 0; i < w.cols; ++i) acc += wo[i] * xr[i];
      yr[o] = acc;
    }
  }
}

void affine_grad_params(ConstView x, ConstView dy, MutView dw, std::span<double> db) {
  for (std::size_t o = 0; o < dw.rows; ++o) {
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
  for (std::size_t r = 0; r < dy.rows; ++r) {
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
  const std::size_t n = x.rows * x.cols;
  for (std::size_t i = 0; i < n; ++i)
    if (x.data[i] < 0.0) x.data[i] = 0.0;
}

void relu_grad(ConstView pre, MutView dy) {
  const std::size_t n = pre.rows * pre.cols;
  for (std::size_t i = 0; i < n; ++i)
    if (pre.data[i] <= 0.0) dy.data[i] = 0.0;
}

void gather_rows(ConstView src, std::span<const std::size_t> index, MutView dst, std::size_t col) {
  for (std::size_t r = 0; r < index.size(); ++r) {
    const double* s = src.row(index[r]);
    double* d = dst.row(r) + col;
    for (std::size_t c = 0; c < src.cols; ++c) d[c] = s[c];
  }
}

void segment_sum(ConstView src, std::size_t col, Segments seg, MutView dst, bool accumulate) {
  for (std::size_t g = 0; g < seg.groups(); ++g) {
    double* d = dst.row(g);
    if (!accumulate)
      for (std::size_t c = 0; c < dst.cols; ++c) d[c] = 0.0;
    for (std::size_t k = seg.offset[g]; k < seg.offset[g + 1]; ++k) {
      const double* s = src.row(seg.index[k]) + col;
      for (std::size_t c = 0; c < dst.cols; ++c) d[c] += s[c];
    }
  }
}

}  // namespace wdp::kernels::serial
