#ifndef CCBAM_OPS_HPP
#define CCBAM_OPS_HPP

#include <vector>

#include "ccbam/tensor.hpp"

// Real-valued primitive kernels. Every routine here is a pure function; the
// complex layer algebra and the autograd wrappers are built on top of these.
//
// Kernel layouts:
//   corr2d (cross-correlation, the deep-learning "conv"): (c_out, c_in, kh, kw)
//   deconv2d (transposed correlation):                    (c_in, c_out, kh, kw)

namespace ccbam::ops {

struct ConvGeom {
    long stride_h = 1, stride_w = 1;
    long pad_h = 0, pad_w = 0;
    // Extra rows/cols appended to a transposed-conv output; must be < stride.
    long out_pad_h = 0, out_pad_w = 0;
};

Shape4 corr2d_out_shape(const Shape4& x, const Shape4& k, const ConvGeom& g);
Shape4 deconv2d_out_shape(const Shape4& x, const Shape4& k, const ConvGeom& g);

template <typename T>
Tensor<T> corr2d(const Tensor<T>& x, const Tensor<T>& k, const ConvGeom& g);
template <typename T>
Tensor<T> corr2d_input_grad(const Tensor<T>& gy, const Tensor<T>& k, const ConvGeom& g,
                            const Shape4& x_shape);
template <typename T>
Tensor<T> corr2d_kernel_grad(const Tensor<T>& x, const Tensor<T>& gy, const ConvGeom& g,
                             const Shape4& k_shape);

template <typename T>
Tensor<T> deconv2d(const Tensor<T>& x, const Tensor<T>& k, const ConvGeom& g);
template <typename T>
Tensor<T> deconv2d_input_grad(const Tensor<T>& gy, const Tensor<T>& k, const ConvGeom& g,
                              const Shape4& x_shape);
template <typename T>
Tensor<T> deconv2d_kernel_grad(const Tensor<T>& x, const Tensor<T>& gy, const ConvGeom& g,
                               const Shape4& k_shape);

// Dense: x (B,N,1,1) with weights (M,N,1,1) -> (B,M,1,1).
template <typename T>
Tensor<T> matmul(const Tensor<T>& x, const Tensor<T>& w);
template <typename T>
Tensor<T> matmul_input_grad(const Tensor<T>& gy, const Tensor<T>& w);
template <typename T>
Tensor<T> matmul_weight_grad(const Tensor<T>& x, const Tensor<T>& gy);

// Elementwise maps.
template <typename T> Tensor<T> relu(const Tensor<T>& x);
template <typename T> Tensor<T> leaky_relu(const Tensor<T>& x, T slope);
template <typename T> Tensor<T> sigmoid(const Tensor<T>& x);
template <typename T> Tensor<T> tanh_map(const Tensor<T>& x);
template <typename T> Tensor<T> log_map(const Tensor<T>& x);
template <typename T> Tensor<T> sqrt_map(const Tensor<T>& x);
template <typename T> Tensor<T> clamp_min(const Tensor<T>& x, T floor);
template <typename T> Tensor<T> scale(const Tensor<T>& x, T c);
template <typename T> Tensor<T> add_const(const Tensor<T>& x, T c);

// Binary elementwise with per-axis broadcasting (each axis: equal or 1).
template <typename T> Tensor<T> add(const Tensor<T>& a, const Tensor<T>& b);
template <typename T> Tensor<T> sub(const Tensor<T>& a, const Tensor<T>& b);
template <typename T> Tensor<T> mul(const Tensor<T>& a, const Tensor<T>& b);
template <typename T> Tensor<T> div(const Tensor<T>& a, const Tensor<T>& b);

// Sum-reduce g onto `target` (axes where target has extent 1); the adjoint of
// broadcasting.
template <typename T>
Tensor<T> reduce_to_shape(const Tensor<T>& g, const Shape4& target);

// Pooling. Max variants report the winning flat index (ties -> first in
// row-major order) so gradients can be routed.
template <typename T> Tensor<T> global_avg_pool(const Tensor<T>& x);
template <typename T>
Tensor<T> global_max_pool(const Tensor<T>& x, std::vector<long>* argmax = nullptr);
template <typename T> Tensor<T> channel_avg_pool(const Tensor<T>& x);
template <typename T>
Tensor<T> channel_max_pool(const Tensor<T>& x, std::vector<long>* argmax = nullptr);

// Shape plumbing.
template <typename T> Tensor<T> concat_channels(const Tensor<T>& a, const Tensor<T>& b);
template <typename T> Tensor<T> slice_channels(const Tensor<T>& x, long c0, long c1);
template <typename T>
Tensor<T> pad2d(const Tensor<T>& x, long h0, long h1, long w0, long w1);
template <typename T>
Tensor<T> crop2d(const Tensor<T>& x, long h0, long h1, long w0, long w1);
template <typename T> Tensor<T> reshape(const Tensor<T>& x, const Shape4& s);
template <typename T> Tensor<T> slice_w(const Tensor<T>& x, long w0, long w1);
template <typename T> Tensor<T> concat_w(const std::vector<Tensor<T>>& parts);

// Reductions.
template <typename T> T sum_all(const Tensor<T>& x);
template <typename T> Tensor<T> sum_per_batch(const Tensor<T>& x);   // (B,1,1,1)
template <typename T> Tensor<T> mean_over_bhw(const Tensor<T>& x);   // (1,C,1,1)

}  // namespace ccbam::ops

#endif
