#ifndef CCBAM_LAYERS_HPP
#define CCBAM_LAYERS_HPP

#include "ccbam/autograd.hpp"

// Complex-valued layer primitives over graph variables. A complex map is a
// CVar (one real plane, one imag plane); linear layers combine the planes by
// the product rule
//   U_r = V_r * W_r - V_i * W_i
//   U_i = V_r * W_i + V_i * W_r
// and every activation applies its real scalar function to each plane
// independently.

namespace ccbam::layers {

template <typename T> CVar<T> complex_conv2d(CVar<T> x, CVar<T> k, ops::ConvGeom g);
template <typename T> CVar<T> complex_deconv2d(CVar<T> x, CVar<T> k, ops::ConvGeom g);

// x: (B,N,1,1) complex vectors, w: (M,N,1,1) complex matrix -> (B,M,1,1).
template <typename T> CVar<T> complex_dense(CVar<T> x, CVar<T> w);

template <typename T> CVar<T> complex_relu(CVar<T> x);
template <typename T> CVar<T> complex_leaky_relu(CVar<T> x, T slope);
template <typename T> CVar<T> complex_sigmoid(CVar<T> x);
template <typename T> CVar<T> complex_tanh(CVar<T> x);

template <typename T> CVar<T> cadd(CVar<T> a, CVar<T> b);
template <typename T> CVar<T> csub(CVar<T> a, CVar<T> b);

// Full complex product: (ar*br - ai*bi) + j(ar*bi + ai*br), broadcasting.
template <typename T> CVar<T> cmul(CVar<T> a, CVar<T> b);

// Componentwise gating: out_r = u_r (.) g_r, out_i = u_i (.) g_i. This is the
// recalibration product used by the attention gates, deliberately not the
// complex product (a gate of 1+1j must be the identity).
template <typename T> CVar<T> apply_gate(CVar<T> u, CVar<T> gate);

enum class PoolAxes { spatial, channel };

// Per-plane pooling. spatial collapses HxW to 1x1 (global only); channel
// collapses C to 1. Max pools reduce each plane independently.
template <typename T> CVar<T> pool_avg(CVar<T> x, PoolAxes axes, bool global = true);
template <typename T> CVar<T> pool_max(CVar<T> x, PoolAxes axes, bool global = true);

template <typename T> CVar<T> cconcat_channels(CVar<T> a, CVar<T> b);
template <typename T> CVar<T> cslice_channels(CVar<T> x, long c0, long c1);
template <typename T> CVar<T> cpad2d(CVar<T> x, long h0, long h1, long w0, long w1);
template <typename T> CVar<T> ccrop2d(CVar<T> x, long h0, long h1, long w0, long w1);
template <typename T> CVar<T> cslice_w(CVar<T> x, long w0, long w1);
template <typename T> CVar<T> cconcat_w(const std::vector<CVar<T>>& parts);
template <typename T> CVar<T> creshape(CVar<T> x, Shape4 s);

// Running first and second moments of the per-channel (re,im) distribution,
// all shaped (1,C,1,1). Initialized to mean 0, covariance I.
template <typename T>
struct BNRunning {
    Tensor<T> mu_r, mu_i;
    Tensor<T> v_rr, v_ii, v_ri;

    static BNRunning init(long c) {
        Shape4 s{1, c, 1, 1};
        return BNRunning{Tensor<T>(s), Tensor<T>(s), Tensor<T>(s, T(1)),
                         Tensor<T>(s, T(1)), Tensor<T>(s)};
    }
};

// Graph handles for the trainable batchnorm pieces, all (1,C,1,1):
// symmetric 2x2 scale [[g_rr, g_ri], [g_ri, g_ii]] and complex shift beta.
template <typename T>
struct BNParamRefs {
    Var<T> g_rr, g_ri, g_ii;
    Var<T> beta_r, beta_i;
};

// Whitening batchnorm: center the (re,im) pair per channel, multiply by the
// inverse square root of its 2x2 covariance (+ eps*I), then apply the
// trainable scale/shift. use_batch_stats selects batch statistics (training
// and gradient checks) vs the running buffers; update_running folds the batch
// statistics into `run` with keep-rate `momentum`.
template <typename T>
CVar<T> complex_batchnorm(CVar<T> x, const BNParamRefs<T>& p, BNRunning<T>& run,
                          T momentum, T eps, bool use_batch_stats, bool update_running);

template <typename T>
struct LstmStep {
    CVar<T> h, c;
};

// One step of the complex LSTM cell. The complex affine preactivation
//   A = w_x (*) x + w_h (*) h_prev + bias
// uses the linear combination rule above; each plane of A then runs standard
// LSTM gating (chunks i,f,g,o along the channel axis) against that plane's
// own cell state. x,h: (B,*,1,1); w_x: (4H,I,1,1); w_h: (4H,H,1,1);
// bias: (1,4H,1,1).
template <typename T>
LstmStep<T> complex_lstm_cell(CVar<T> x, CVar<T> h_prev, CVar<T> c_prev, CVar<T> w_x,
                              CVar<T> w_h, CVar<T> bias);

}  // namespace ccbam::layers

#endif
