#include "ccbam/layers.hpp"

namespace ccbam::layers {

template <typename T>
CVar<T> complex_conv2d(CVar<T> x, CVar<T> k, ops::ConvGeom g) {
    Var<T> rr = ag::corr2d(x.re, k.re, g);
    Var<T> ii = ag::corr2d(x.im, k.im, g);
    Var<T> ri = ag::corr2d(x.re, k.im, g);
    Var<T> ir = ag::corr2d(x.im, k.re, g);
    return CVar<T>{rr - ii, ri + ir};
}

template <typename T>
CVar<T> complex_deconv2d(CVar<T> x, CVar<T> k, ops::ConvGeom g) {
    Var<T> rr = ag::deconv2d(x.re, k.re, g);
    Var<T> ii = ag::deconv2d(x.im, k.im, g);
    Var<T> ri = ag::deconv2d(x.re, k.im, g);
    Var<T> ir = ag::deconv2d(x.im, k.re, g);
    return CVar<T>{rr - ii, ri + ir};
}

template <typename T>
CVar<T> complex_dense(CVar<T> x, CVar<T> w) {
    Var<T> rr = ag::matmul(x.re, w.re);
    Var<T> ii = ag::matmul(x.im, w.im);
    Var<T> ri = ag::matmul(x.re, w.im);
    Var<T> ir = ag::matmul(x.im, w.re);
    return CVar<T>{rr - ii, ri + ir};
}

template <typename T>
CVar<T> complex_relu(CVar<T> x) {
    return CVar<T>{ag::relu(x.re), ag::relu(x.im)};
}
template <typename T>
CVar<T> complex_leaky_relu(CVar<T> x, T slope) {
    return CVar<T>{ag::leaky_relu(x.re, slope), ag::leaky_relu(x.im, slope)};
}
template <typename T>
CVar<T> complex_sigmoid(CVar<T> x) {
    return CVar<T>{ag::sigmoid(x.re), ag::sigmoid(x.im)};
}
template <typename T>
CVar<T> complex_tanh(CVar<T> x) {
    return CVar<T>{ag::tanh_v(x.re), ag::tanh_v(x.im)};
}

template <typename T>
CVar<T> cadd(CVar<T> a, CVar<T> b) {
    return CVar<T>{a.re + b.re, a.im + b.im};
}
template <typename T>
CVar<T> csub(CVar<T> a, CVar<T> b) {
    return CVar<T>{a.re - b.re, a.im - b.im};
}

template <typename T>
CVar<T> cmul(CVar<T> a, CVar<T> b) {
    return CVar<T>{a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

template <typename T>
CVar<T> apply_gate(CVar<T> u, CVar<T> gate) {
    return CVar<T>{u.re * gate.re, u.im * gate.im};
}

template <typename T>
CVar<T> pool_avg(CVar<T> x, PoolAxes axes, bool global) {
    if (axes == PoolAxes::spatial) {
        if (!global) shape_error("pool_avg", "windowed spatial pooling not supported");
        return CVar<T>{ag::global_avg_pool(x.re), ag::global_avg_pool(x.im)};
    }
    return CVar<T>{ag::channel_avg_pool(x.re), ag::channel_avg_pool(x.im)};
}

template <typename T>
CVar<T> pool_max(CVar<T> x, PoolAxes axes, bool global) {
    if (axes == PoolAxes::spatial) {
        if (!global) shape_error("pool_max", "windowed spatial pooling not supported");
        return CVar<T>{ag::global_max_pool(x.re), ag::global_max_pool(x.im)};
    }
    return CVar<T>{ag::channel_max_pool(x.re), ag::channel_max_pool(x.im)};
}

template <typename T>
CVar<T> cconcat_channels(CVar<T> a, CVar<T> b) {
    return CVar<T>{ag::concat_channels(a.re, b.re), ag::concat_channels(a.im, b.im)};
}
template <typename T>
CVar<T> cslice_channels(CVar<T> x, long c0, long c1) {
    return CVar<T>{ag::slice_channels(x.re, c0, c1), ag::slice_channels(x.im, c0, c1)};
}
template <typename T>
CVar<T> cpad2d(CVar<T> x, long h0, long h1, long w0, long w1) {
    return CVar<T>{ag::pad2d(x.re, h0, h1, w0, w1), ag::pad2d(x.im, h0, h1, w0, w1)};
}
template <typename T>
CVar<T> ccrop2d(CVar<T> x, long h0, long h1, long w0, long w1) {
    return CVar<T>{ag::crop2d(x.re, h0, h1, w0, w1), ag::crop2d(x.im, h0, h1, w0, w1)};
}
template <typename T>
CVar<T> cslice_w(CVar<T> x, long w0, long w1) {
    return CVar<T>{ag::slice_w(x.re, w0, w1), ag::slice_w(x.im, w0, w1)};
}
template <typename T>
CVar<T> cconcat_w(const std::vector<CVar<T>>& parts) {
    std::vector<Var<T>> re, im;
    re.reserve(parts.size());
    im.reserve(parts.size());
    for (const CVar<T>& p : parts) {
        re.push_back(p.re);
        im.push_back(p.im);
    }
    return CVar<T>{ag::concat_w(re), ag::concat_w(im)};
}
template <typename T>
CVar<T> creshape(CVar<T> x, Shape4 s) {
    return CVar<T>{ag::reshape(x.re, s), ag::reshape(x.im, s)};
}

template <typename T>
CVar<T> complex_batchnorm(CVar<T> x, const BNParamRefs<T>& p, BNRunning<T>& run,
                          T momentum, T eps, bool use_batch_stats, bool update_running) {
    Graph<T>& g = *x.re.g;
    const Shape4& xs = g.value(x.re).shape;

    Var<T> xc_r = x.re, xc_i = x.im;
    Var<T> v_rr, v_ii, v_ri;
    if (use_batch_stats) {
        if (xs.b * xs.h * xs.w < 2)
            shape_error("complex_batchnorm",
                        "batch statistics need at least 2 samples per channel, got " +
                            xs.str());
        Var<T> mu_r = ag::mean_over_bhw(x.re);
        Var<T> mu_i = ag::mean_over_bhw(x.im);
        xc_r = x.re - mu_r;
        xc_i = x.im - mu_i;
        v_rr = ag::mean_over_bhw(xc_r * xc_r);
        v_ii = ag::mean_over_bhw(xc_i * xc_i);
        v_ri = ag::mean_over_bhw(xc_r * xc_i);
        if (update_running) {
            auto fold = [momentum](Tensor<T>& running, const Tensor<T>& batch) {
                for (size_t i = 0; i < running.data.size(); ++i)
                    running.data[i] =
                        momentum * running.data[i] + (T(1) - momentum) * batch.data[i];
            };
            fold(run.mu_r, g.value(mu_r));
            fold(run.mu_i, g.value(mu_i));
            fold(run.v_rr, g.value(v_rr));
            fold(run.v_ii, g.value(v_ii));
            fold(run.v_ri, g.value(v_ri));
        }
    } else {
        xc_r = x.re - g.leaf(run.mu_r);
        xc_i = x.im - g.leaf(run.mu_i);
        v_rr = g.leaf(run.v_rr);
        v_ii = g.leaf(run.v_ii);
        v_ri = g.leaf(run.v_ri);
    }

    v_rr = ag::add_const_v(v_rr, eps);
    v_ii = ag::add_const_v(v_ii, eps);

    // Closed-form inverse square root of the symmetric 2x2 covariance:
    // with s = sqrt(det V), t = sqrt(tr V + 2s),
    //   V^{-1/2} = [[v_ii + s, -v_ri], [-v_ri, v_rr + s]] / (s*t)
    Var<T> det = v_rr * v_ii - v_ri * v_ri;
    Var<T> s = ag::sqrt_v(det);
    Var<T> t = ag::sqrt_v(v_rr + v_ii + ag::scale_v(s, T(2)));
    Var<T> st = s * t;
    Var<T> a = (v_ii + s) / st;
    Var<T> b = -(v_ri / st);
    Var<T> c = (v_rr + s) / st;

    Var<T> w_r = a * xc_r + b * xc_i;
    Var<T> w_i = b * xc_r + c * xc_i;

    Var<T> out_r = p.g_rr * w_r + p.g_ri * w_i + p.beta_r;
    Var<T> out_i = p.g_ri * w_r + p.g_ii * w_i + p.beta_i;
    return CVar<T>{out_r, out_i};
}

template <typename T>
LstmStep<T> complex_lstm_cell(CVar<T> x, CVar<T> h_prev, CVar<T> c_prev, CVar<T> w_x,
                              CVar<T> w_h, CVar<T> bias) {
    Graph<T>& g = *x.re.g;
    long four_h = g.value(w_x.re).shape.b;
    if (four_h % 4 != 0)
        shape_error("complex_lstm_cell", "gate rows must be 4*hidden, got " +
                                             g.value(w_x.re).shape.str());
    long hidden = four_h / 4;
    if (g.value(h_prev.re).shape.c != hidden || g.value(c_prev.re).shape.c != hidden)
        shape_error("complex_lstm_cell", "state size mismatch");

    CVar<T> pre = cadd(cadd(complex_dense(x, w_x), complex_dense(h_prev, w_h)), bias);

    // Per-plane standard gating with per-plane cell state; chunk order i,f,g,o.
    auto plane = [hidden](Var<T> a, Var<T> c_in) {
        Var<T> i = ag::sigmoid(ag::slice_channels(a, 0, hidden));
        Var<T> f = ag::sigmoid(ag::slice_channels(a, hidden, 2 * hidden));
        Var<T> gg = ag::tanh_v(ag::slice_channels(a, 2 * hidden, 3 * hidden));
        Var<T> o = ag::sigmoid(ag::slice_channels(a, 3 * hidden, 4 * hidden));
        Var<T> c_out = f * c_in + i * gg;
        Var<T> h_out = o * ag::tanh_v(c_out);
        return std::pair<Var<T>, Var<T>>{h_out, c_out};
    };
    auto [h_r, c_r] = plane(pre.re, c_prev.re);
    auto [h_i, c_i] = plane(pre.im, c_prev.im);
    return LstmStep<T>{CVar<T>{h_r, h_i}, CVar<T>{c_r, c_i}};
}

#define CCBAM_INSTANTIATE_LAYERS(T)                                                  \
    template CVar<T> complex_conv2d<T>(CVar<T>, CVar<T>, ops::ConvGeom);             \
    template CVar<T> complex_deconv2d<T>(CVar<T>, CVar<T>, ops::ConvGeom);           \
    template CVar<T> complex_dense<T>(CVar<T>, CVar<T>);                             \
    template CVar<T> complex_relu<T>(CVar<T>);                                       \
    template CVar<T> complex_leaky_relu<T>(CVar<T>, T);                              \
    template CVar<T> complex_sigmoid<T>(CVar<T>);                                    \
    template CVar<T> complex_tanh<T>(CVar<T>);                                       \
    template CVar<T> cadd<T>(CVar<T>, CVar<T>);                                      \
    template CVar<T> csub<T>(CVar<T>, CVar<T>);                                      \
    template CVar<T> cmul<T>(CVar<T>, CVar<T>);                                      \
    template CVar<T> apply_gate<T>(CVar<T>, CVar<T>);                                \
    template CVar<T> pool_avg<T>(CVar<T>, PoolAxes, bool);                           \
    template CVar<T> pool_max<T>(CVar<T>, PoolAxes, bool);                           \
    template CVar<T> cconcat_channels<T>(CVar<T>, CVar<T>);                          \
    template CVar<T> cslice_channels<T>(CVar<T>, long, long);                        \
    template CVar<T> cpad2d<T>(CVar<T>, long, long, long, long);                     \
    template CVar<T> ccrop2d<T>(CVar<T>, long, long, long, long);                    \
    template CVar<T> cslice_w<T>(CVar<T>, long, long);                               \
    template CVar<T> cconcat_w<T>(const std::vector<CVar<T>>&);                      \
    template CVar<T> creshape<T>(CVar<T>, Shape4);                                   \
    template CVar<T> complex_batchnorm<T>(CVar<T>, const BNParamRefs<T>&,            \
                                          BNRunning<T>&, T, T, bool, bool);          \
    template LstmStep<T> complex_lstm_cell<T>(CVar<T>, CVar<T>, CVar<T>, CVar<T>,    \
                                              CVar<T>, CVar<T>);

CCBAM_INSTANTIATE_LAYERS(float)
CCBAM_INSTANTIATE_LAYERS(double)

}  // namespace ccbam::layers
