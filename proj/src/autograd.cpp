#include "ccbam/autograd.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace ccbam::ag {

using ops::ConvGeom;

template <typename T>
Var<T> corr2d(Var<T> x, Var<T> k, ConvGeom g) {
    Graph<T>& gr = *x.g;
    Tensor<T> out = ops::corr2d(gr.value(x), gr.value(k), g);
    int xid = x.id, kid = k.id, oid = static_cast<int>(gr.size());
    return gr.make_op(std::move(out), {x, k}, [xid, kid, oid, g](Graph<T>& gg) {
        const Tensor<T>& gy = gg.node(oid).grad;
        if (gg.node(xid).needs_grad)
            gg.accum(xid, ops::corr2d_input_grad(gy, gg.node(kid).value, g,
                                                 gg.node(xid).value.shape));
        if (gg.node(kid).needs_grad)
            gg.accum(kid, ops::corr2d_kernel_grad(gg.node(xid).value, gy, g,
                                                  gg.node(kid).value.shape));
    });
}

template <typename T>
Var<T> deconv2d(Var<T> x, Var<T> k, ConvGeom g) {
    Graph<T>& gr = *x.g;
    Tensor<T> out = ops::deconv2d(gr.value(x), gr.value(k), g);
    int xid = x.id, kid = k.id, oid = static_cast<int>(gr.size());
    return gr.make_op(std::move(out), {x, k}, [xid, kid, oid, g](Graph<T>& gg) {
        const Tensor<T>& gy = gg.node(oid).grad;
        if (gg.node(xid).needs_grad)
            gg.accum(xid, ops::deconv2d_input_grad(gy, gg.node(kid).value, g,
                                                   gg.node(xid).value.shape));
        if (gg.node(kid).needs_grad)
            gg.accum(kid, ops::deconv2d_kernel_grad(gg.node(xid).value, gy, g,
                                                    gg.node(kid).value.shape));
    });
}

template <typename T>
Var<T> matmul(Var<T> x, Var<T> w) {
    Graph<T>& gr = *x.g;
    Tensor<T> out = ops::matmul(gr.value(x), gr.value(w));
    int xid = x.id, wid = w.id, oid = static_cast<int>(gr.size());
    return gr.make_op(std::move(out), {x, w}, [xid, wid, oid](Graph<T>& gg) {
        const Tensor<T>& gy = gg.node(oid).grad;
        if (gg.node(xid).needs_grad)
            gg.accum(xid, ops::matmul_input_grad(gy, gg.node(wid).value));
        if (gg.node(wid).needs_grad)
            gg.accum(wid, ops::matmul_weight_grad(gg.node(xid).value, gy));
    });
}

// Unary elementwise helper: dfn(x_value, out_value) -> local derivative.
template <typename T, typename D>
static Var<T> unary_op(Var<T> x, Tensor<T> out, D dfn) {
    Graph<T>& gr = *x.g;
    int xid = x.id, oid = static_cast<int>(gr.size());
    return gr.make_op(std::move(out), {x}, [xid, oid, dfn](Graph<T>& gg) {
        const Tensor<T>& gy = gg.node(oid).grad;
        const Tensor<T>& xv = gg.node(xid).value;
        const Tensor<T>& ov = gg.node(oid).value;
        Tensor<T> gx(xv.shape);
        for (size_t i = 0; i < gx.data.size(); ++i)
            gx.data[i] = gy.data[i] * dfn(xv.data[i], ov.data[i]);
        gg.accum(xid, gx);
    });
}

template <typename T> Var<T> relu(Var<T> x) {
    return unary_op(x, ops::relu(x.g->value(x)),
                    [](T xv, T) { return xv > T(0) ? T(1) : T(0); });
}
template <typename T> Var<T> leaky_relu(Var<T> x, T slope) {
    return unary_op(x, ops::leaky_relu(x.g->value(x), slope),
                    [slope](T xv, T) { return xv > T(0) ? T(1) : slope; });
}
template <typename T> Var<T> sigmoid(Var<T> x) {
    return unary_op(x, ops::sigmoid(x.g->value(x)),
                    [](T, T ov) { return ov * (T(1) - ov); });
}
template <typename T> Var<T> tanh_v(Var<T> x) {
    return unary_op(x, ops::tanh_map(x.g->value(x)),
                    [](T, T ov) { return T(1) - ov * ov; });
}
template <typename T> Var<T> log_v(Var<T> x) {
    return unary_op(x, ops::log_map(x.g->value(x)), [](T xv, T) { return T(1) / xv; });
}
template <typename T> Var<T> sqrt_v(Var<T> x) {
    return unary_op(x, ops::sqrt_map(x.g->value(x)),
                    [](T, T ov) { return T(0.5) / ov; });
}
template <typename T> Var<T> clamp_min_v(Var<T> x, T floor) {
    return unary_op(x, ops::clamp_min(x.g->value(x), floor),
                    [floor](T xv, T) { return xv > floor ? T(1) : T(0); });
}
template <typename T> Var<T> scale_v(Var<T> x, T c) {
    return unary_op(x, ops::scale(x.g->value(x), c), [c](T, T) { return c; });
}
template <typename T> Var<T> add_const_v(Var<T> x, T c) {
    return unary_op(x, ops::add_const(x.g->value(x), c), [](T, T) { return T(1); });
}

template <typename T>
Var<T> add(Var<T> a, Var<T> b) {
    Graph<T>& gr = *a.g;
    Tensor<T> out = ops::add(gr.value(a), gr.value(b));
    int aid = a.id, bid = b.id, oid = static_cast<int>(gr.size());
    return gr.make_op(std::move(out), {a, b}, [aid, bid, oid](Graph<T>& gg) {
        const Tensor<T>& gy = gg.node(oid).grad;
        if (gg.node(aid).needs_grad)
            gg.accum(aid, ops::reduce_to_shape(gy, gg.node(aid).value.shape));
        if (gg.node(bid).needs_grad)
            gg.accum(bid, ops::reduce_to_shape(gy, gg.node(bid).value.shape));
    });
}

template <typename T>
Var<T> sub(Var<T> a, Var<T> b) {
    Graph<T>& gr = *a.g;
    Tensor<T> out = ops::sub(gr.value(a), gr.value(b));
    int aid = a.id, bid = b.id, oid = static_cast<int>(gr.size());
    return gr.make_op(std::move(out), {a, b}, [aid, bid, oid](Graph<T>& gg) {
        const Tensor<T>& gy = gg.node(oid).grad;
        if (gg.node(aid).needs_grad)
            gg.accum(aid, ops::reduce_to_shape(gy, gg.node(aid).value.shape));
        if (gg.node(bid).needs_grad)
            gg.accum(bid, ops::reduce_to_shape(ops::scale(gy, T(-1)),
                                               gg.node(bid).value.shape));
    });
}

template <typename T>
Var<T> mul(Var<T> a, Var<T> b) {
    Graph<T>& gr = *a.g;
    Tensor<T> out = ops::mul(gr.value(a), gr.value(b));
    int aid = a.id, bid = b.id, oid = static_cast<int>(gr.size());
    return gr.make_op(std::move(out), {a, b}, [aid, bid, oid](Graph<T>& gg) {
        const Tensor<T>& gy = gg.node(oid).grad;
        if (gg.node(aid).needs_grad)
            gg.accum(aid, ops::reduce_to_shape(ops::mul(gy, gg.node(bid).value),
                                               gg.node(aid).value.shape));
        if (gg.node(bid).needs_grad)
            gg.accum(bid, ops::reduce_to_shape(ops::mul(gy, gg.node(aid).value),
                                               gg.node(bid).value.shape));
    });
}

template <typename T>
Var<T> div_v(Var<T> a, Var<T> b) {
    Graph<T>& gr = *a.g;
    Tensor<T> out = ops::div(gr.value(a), gr.value(b));
    int aid = a.id, bid = b.id, oid = static_cast<int>(gr.size());
    return gr.make_op(std::move(out), {a, b}, [aid, bid, oid](Graph<T>& gg) {
        const Tensor<T>& gy = gg.node(oid).grad;
        const Tensor<T>& bv = gg.node(bid).value;
        if (gg.node(aid).needs_grad)
            gg.accum(aid, ops::reduce_to_shape(ops::div(gy, bv),
                                               gg.node(aid).value.shape));
        if (gg.node(bid).needs_grad) {
            // d(a/b)/db = -a / b^2 = -out / b
            Tensor<T> gb = ops::mul(gy, ops::div(gg.node(oid).value, bv));
            gg.accum(bid, ops::reduce_to_shape(ops::scale(gb, T(-1)), bv.shape));
        }
    });
}

template <typename T>
Var<T> global_avg_pool(Var<T> x) {
    Graph<T>& gr = *x.g;
    Tensor<T> out = ops::global_avg_pool(gr.value(x));
    int xid = x.id, oid = static_cast<int>(gr.size());
    return gr.make_op(std::move(out), {x}, [xid, oid](Graph<T>& gg) {
        const Tensor<T>& gy = gg.node(oid).grad;
        const Shape4& xs = gg.node(xid).value.shape;
        Tensor<T> gx(xs);
        T inv = T(1) / static_cast<T>(xs.h * xs.w);
        for (long b = 0; b < xs.b; ++b)
            for (long c = 0; c < xs.c; ++c) {
                T v = gy.at(b, c, 0, 0) * inv;
                T* p = gx.data.data() + xs.index(b, c, 0, 0);
                for (long i = 0; i < xs.h * xs.w; ++i) p[i] = v;
            }
        gg.accum(xid, gx);
    });
}

template <typename T>
Var<T> global_max_pool(Var<T> x) {
    Graph<T>& gr = *x.g;
    auto argmax = std::make_shared<std::vector<long>>();
    Tensor<T> out = ops::global_max_pool(gr.value(x), argmax.get());
    int xid = x.id, oid = static_cast<int>(gr.size());
    return gr.make_op(std::move(out), {x}, [xid, oid, argmax](Graph<T>& gg) {
        const Tensor<T>& gy = gg.node(oid).grad;
        const Shape4& xs = gg.node(xid).value.shape;
        Tensor<T> gx(xs);
        for (long b = 0; b < xs.b; ++b)
            for (long c = 0; c < xs.c; ++c)
                gx.data[xs.index(b, c, 0, 0) + (*argmax)[static_cast<size_t>(b * xs.c + c)]] =
                    gy.at(b, c, 0, 0);
        gg.accum(xid, gx);
    });
}

template <typename T>
Var<T> channel_avg_pool(Var<T> x) {
    Graph<T>& gr = *x.g;
    Tensor<T> out = ops::channel_avg_pool(gr.value(x));
    int xid = x.id, oid = static_cast<int>(gr.size());
    return gr.make_op(std::move(out), {x}, [xid, oid](Graph<T>& gg) {
        const Tensor<T>& gy = gg.node(oid).grad;
        const Shape4& xs = gg.node(xid).value.shape;
        Tensor<T> gx(xs);
        T inv = T(1) / static_cast<T>(xs.c);
        for (long b = 0; b < xs.b; ++b)
            for (long c = 0; c < xs.c; ++c) {
                const T* s = gy.data.data() + gy.shape.index(b, 0, 0, 0);
                T* p = gx.data.data() + xs.index(b, c, 0, 0);
                for (long i = 0; i < xs.h * xs.w; ++i) p[i] = s[i] * inv;
            }
        gg.accum(xid, gx);
    });
}

template <typename T>
Var<T> channel_max_pool(Var<T> x) {
    Graph<T>& gr = *x.g;
    auto argmax = std::make_shared<std::vector<long>>();
    Tensor<T> out = ops::channel_max_pool(gr.value(x), argmax.get());
    int xid = x.id, oid = static_cast<int>(gr.size());
    return gr.make_op(std::move(out), {x}, [xid, oid, argmax](Graph<T>& gg) {
        const Tensor<T>& gy = gg.node(oid).grad;
        const Shape4& xs = gg.node(xid).value.shape;
        Tensor<T> gx(xs);
        long hw = xs.h * xs.w;
        for (long b = 0; b < xs.b; ++b)
            for (long i = 0; i < hw; ++i) {
                long c = (*argmax)[static_cast<size_t>(b * hw + i)];
                gx.data[xs.index(b, c, 0, 0) + i] = gy.data[gy.shape.index(b, 0, 0, 0) + i];
            }
        gg.accum(xid, gx);
    });
}

template <typename T>
Var<T> concat_channels(Var<T> a, Var<T> b) {
    Graph<T>& gr = *a.g;
    Tensor<T> out = ops::concat_channels(gr.value(a), gr.value(b));
    int aid = a.id, bid = b.id, oid = static_cast<int>(gr.size());
    return gr.make_op(std::move(out), {a, b}, [aid, bid, oid](Graph<T>& gg) {
        const Tensor<T>& gy = gg.node(oid).grad;
        long ca = gg.node(aid).value.shape.c;
        long cb = gg.node(bid).value.shape.c;
        if (gg.node(aid).needs_grad) gg.accum(aid, ops::slice_channels(gy, 0, ca));
        if (gg.node(bid).needs_grad) gg.accum(bid, ops::slice_channels(gy, ca, ca + cb));
    });
}

template <typename T>
Var<T> slice_channels(Var<T> x, long c0, long c1) {
    Graph<T>& gr = *x.g;
    Tensor<T> out = ops::slice_channels(gr.value(x), c0, c1);
    int xid = x.id, oid = static_cast<int>(gr.size());
    return gr.make_op(std::move(out), {x}, [xid, oid, c0, c1](Graph<T>& gg) {
        const Tensor<T>& gy = gg.node(oid).grad;
        const Shape4& xs = gg.node(xid).value.shape;
        Tensor<T> gx(xs);
        long hw = xs.h * xs.w;
        for (long b = 0; b < xs.b; ++b)
            std::copy(gy.data.begin() + gy.shape.index(b, 0, 0, 0),
                      gy.data.begin() + gy.shape.index(b, 0, 0, 0) + (c1 - c0) * hw,
                      gx.data.begin() + xs.index(b, c0, 0, 0));
        gg.accum(xid, gx);
    });
}

template <typename T>
Var<T> pad2d(Var<T> x, long h0, long h1, long w0, long w1) {
    Graph<T>& gr = *x.g;
    Tensor<T> out = ops::pad2d(gr.value(x), h0, h1, w0, w1);
    int xid = x.id, oid = static_cast<int>(gr.size());
    return gr.make_op(std::move(out), {x}, [xid, oid, h0, h1, w0, w1](Graph<T>& gg) {
        gg.accum(xid, ops::crop2d(gg.node(oid).grad, h0, h1, w0, w1));
    });
}

template <typename T>
Var<T> crop2d(Var<T> x, long h0, long h1, long w0, long w1) {
    Graph<T>& gr = *x.g;
    Tensor<T> out = ops::crop2d(gr.value(x), h0, h1, w0, w1);
    int xid = x.id, oid = static_cast<int>(gr.size());
    return gr.make_op(std::move(out), {x}, [xid, oid, h0, h1, w0, w1](Graph<T>& gg) {
        gg.accum(xid, ops::pad2d(gg.node(oid).grad, h0, h1, w0, w1));
    });
}

template <typename T>
Var<T> reshape(Var<T> x, Shape4 s) {
    Graph<T>& gr = *x.g;
    Tensor<T> out = ops::reshape(gr.value(x), s);
    int xid = x.id, oid = static_cast<int>(gr.size());
    return gr.make_op(std::move(out), {x}, [xid, oid](Graph<T>& gg) {
        gg.accum(xid, ops::reshape(gg.node(oid).grad, gg.node(xid).value.shape));
    });
}

template <typename T>
Var<T> slice_w(Var<T> x, long w0, long w1) {
    Graph<T>& gr = *x.g;
    Tensor<T> out = ops::slice_w(gr.value(x), w0, w1);
    int xid = x.id, oid = static_cast<int>(gr.size());
    return gr.make_op(std::move(out), {x}, [xid, oid, w0, w1](Graph<T>& gg) {
        const Tensor<T>& gy = gg.node(oid).grad;
        const Shape4& xs = gg.node(xid).value.shape;
        Tensor<T> gx(xs);
        for (long b = 0; b < xs.b; ++b)
            for (long c = 0; c < xs.c; ++c)
                for (long h = 0; h < xs.h; ++h)
                    std::copy(gy.data.begin() + gy.shape.index(b, c, h, 0),
                              gy.data.begin() + gy.shape.index(b, c, h, 0) + (w1 - w0),
                              gx.data.begin() + xs.index(b, c, h, w0));
        gg.accum(xid, gx);
    });
}

template <typename T>
Var<T> concat_w(const std::vector<Var<T>>& parts) {
    if (parts.empty()) shape_error("concat_w", "no parts");
    Graph<T>& gr = *parts[0].g;
    std::vector<Tensor<T>> vals;
    vals.reserve(parts.size());
    for (const Var<T>& p : parts) vals.push_back(gr.value(p));
    Tensor<T> out = ops::concat_w(vals);
    std::vector<int> ids;
    std::vector<long> widths;
    for (const Var<T>& p : parts) {
        ids.push_back(p.id);
        widths.push_back(gr.value(p).shape.w);
    }
    int oid = static_cast<int>(gr.size());
    return gr.make_op(std::move(out), parts, [ids, widths, oid](Graph<T>& gg) {
        const Tensor<T>& gy = gg.node(oid).grad;
        long off = 0;
        for (size_t i = 0; i < ids.size(); ++i) {
            if (gg.node(ids[i]).needs_grad)
                gg.accum(ids[i], ops::slice_w(gy, off, off + widths[i]));
            off += widths[i];
        }
    });
}

template <typename T>
Var<T> sum_all(Var<T> x) {
    Graph<T>& gr = *x.g;
    Tensor<T> out(Shape4{1, 1, 1, 1});
    out.data[0] = ops::sum_all(gr.value(x));
    int xid = x.id, oid = static_cast<int>(gr.size());
    return gr.make_op(std::move(out), {x}, [xid, oid](Graph<T>& gg) {
        T g = gg.node(oid).grad.data[0];
        gg.accum(xid, Tensor<T>(gg.node(xid).value.shape, g));
    });
}

template <typename T>
Var<T> mean_all(Var<T> x) {
    long n = x.g->value(x).count();
    return scale_v(sum_all(x), T(1) / static_cast<T>(n));
}

template <typename T>
Var<T> sum_per_batch(Var<T> x) {
    Graph<T>& gr = *x.g;
    Tensor<T> out = ops::sum_per_batch(gr.value(x));
    int xid = x.id, oid = static_cast<int>(gr.size());
    return gr.make_op(std::move(out), {x}, [xid, oid](Graph<T>& gg) {
        const Tensor<T>& gy = gg.node(oid).grad;
        const Shape4& xs = gg.node(xid).value.shape;
        Tensor<T> gx(xs);
        long chw = xs.c * xs.h * xs.w;
        for (long b = 0; b < xs.b; ++b)
            std::fill(gx.data.begin() + b * chw, gx.data.begin() + (b + 1) * chw,
                      gy.data[static_cast<size_t>(b)]);
        gg.accum(xid, gx);
    });
}

template <typename T>
Var<T> mean_over_bhw(Var<T> x) {
    Graph<T>& gr = *x.g;
    Tensor<T> out = ops::mean_over_bhw(gr.value(x));
    int xid = x.id, oid = static_cast<int>(gr.size());
    return gr.make_op(std::move(out), {x}, [xid, oid](Graph<T>& gg) {
        const Tensor<T>& gy = gg.node(oid).grad;
        const Shape4& xs = gg.node(xid).value.shape;
        Tensor<T> gx(xs);
        T inv = T(1) / static_cast<T>(xs.b * xs.h * xs.w);
        for (long b = 0; b < xs.b; ++b)
            for (long c = 0; c < xs.c; ++c) {
                T v = gy.data[static_cast<size_t>(c)] * inv;
                T* p = gx.data.data() + xs.index(b, c, 0, 0);
                for (long i = 0; i < xs.h * xs.w; ++i) p[i] = v;
            }
        gg.accum(xid, gx);
    });
}

#define CCBAM_INSTANTIATE_AG(T)                                                    \
    template Var<T> corr2d<T>(Var<T>, Var<T>, ConvGeom);                           \
    template Var<T> deconv2d<T>(Var<T>, Var<T>, ConvGeom);                         \
    template Var<T> matmul<T>(Var<T>, Var<T>);                                     \
    template Var<T> relu<T>(Var<T>);                                               \
    template Var<T> leaky_relu<T>(Var<T>, T);                                      \
    template Var<T> sigmoid<T>(Var<T>);                                            \
    template Var<T> tanh_v<T>(Var<T>);                                             \
    template Var<T> log_v<T>(Var<T>);                                              \
    template Var<T> sqrt_v<T>(Var<T>);                                             \
    template Var<T> clamp_min_v<T>(Var<T>, T);                                     \
    template Var<T> scale_v<T>(Var<T>, T);                                         \
    template Var<T> add_const_v<T>(Var<T>, T);                                     \
    template Var<T> add<T>(Var<T>, Var<T>);                                        \
    template Var<T> sub<T>(Var<T>, Var<T>);                                        \
    template Var<T> mul<T>(Var<T>, Var<T>);                                        \
    template Var<T> div_v<T>(Var<T>, Var<T>);                                      \
    template Var<T> global_avg_pool<T>(Var<T>);                                    \
    template Var<T> global_max_pool<T>(Var<T>);                                    \
    template Var<T> channel_avg_pool<T>(Var<T>);                                   \
    template Var<T> channel_max_pool<T>(Var<T>);                                   \
    template Var<T> concat_channels<T>(Var<T>, Var<T>);                            \
    template Var<T> slice_channels<T>(Var<T>, long, long);                         \
    template Var<T> pad2d<T>(Var<T>, long, long, long, long);                      \
    template Var<T> crop2d<T>(Var<T>, long, long, long, long);                     \
    template Var<T> reshape<T>(Var<T>, Shape4);                                    \
    template Var<T> slice_w<T>(Var<T>, long, long);                                \
    template Var<T> concat_w<T>(const std::vector<Var<T>>&);                       \
    template Var<T> sum_all<T>(Var<T>);                                            \
    template Var<T> mean_all<T>(Var<T>);                                           \
    template Var<T> sum_per_batch<T>(Var<T>);                                      \
    template Var<T> mean_over_bhw<T>(Var<T>);

CCBAM_INSTANTIATE_AG(float)
CCBAM_INSTANTIATE_AG(double)

}  // namespace ccbam::ag
