#pragma once

// Dense and message-passing primitives behind the GNN. `serial` is the reference
// implementation; `parallel` splits the same loops across OpenMP threads. Every output
// element is produced by one thread in the same summation order as the serial loop, so
// the two agree bit for bit.

#include <cstddef>
#include <span>

namespace wdp {

enum class ExecPolicy { serial, parallel };

namespace kernels {

/// Row-major view: rows x cols contiguous doubles.
struct ConstView {
  const double* data = nullptr;
  std::size_t rows = 0;
  std::size_t cols = 0;
  const double* row(std::size_t r) const { return data + r * cols; }
};

struct MutView {
  double* data = nullptr;
  std::size_t rows = 0;
  std::size_t cols = 0;
  double* row(std::size_t r) const { return data + r * cols; }
};

/// Compressed grouping: group g owns entries index[offset[g] .. offset[g+1]).
struct Segments {
  std::span<const std::size_t> offset;
  std::span<const std::size_t> index;
  std::size_t groups() const { return offset.empty() ? 0 : offset.size() - 1; }
};

namespace serial {
/// y = x W^T + b, with W stored (out x in).
void affine(ConstView x, ConstView w, std::span<const double> b, MutView y);
/// dW += dy^T x and db += column sums of dy.
void affine_grad_params(ConstView x, ConstView dy, MutView dw, std::span<double> db);
/// dx = dy W.
void affine_grad_input(ConstView dy, ConstView w, MutView dx);
void relu(MutView x);
/// Zeroes dy wherever the pre-activation is <= 0.
void relu_grad(ConstView pre, MutView dy);
/// dst[r, col .. col + src.cols) = src[index[r]].
void gather_rows(ConstView src, std::span<const std::size_t> index, MutView dst, std::size_t col);
/// dst[g] = (or +=) sum over k in group g of src[seg.index[k], col .. col + dst.cols).
void segment_sum(ConstView src, std::size_t col, Segments seg, MutView dst, bool accumulate);
}  // namespace serial

namespace parallel {
/// y = x W^T + b, with W stored (out x in).
void affine(ConstView x, ConstView w, std::span<const double> b, MutView y);
/// dW += dy^T x and db += column sums of dy.
void affine_grad_params(ConstView x, ConstView dy, MutView dw, std::span<double> db);
/// dx = dy W.
void affine_grad_input(ConstView dy, ConstView w, MutView dx);
void relu(MutView x);
/// Zeroes dy wherever the pre-activation is <= 0.
void relu_grad(ConstView pre, MutView dy);
/// dst[r, col .. col + src.cols) = src[index[r]].
void gather_rows(ConstView src, std::span<const std::size_t> index, MutView dst, std::size_t col);
/// dst[g] = (or +=) sum over k in group g of src[seg.index[k], col .. col + dst.cols).
void segment_sum(ConstView src, std::size_t col, Segments seg, MutView dst, bool accumulate);
}  // namespace parallel

}  // namespace kernels
}  // namespace wdp
