#include "ccbam/ops.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>

#include "ccbam/threading.hpp"

namespace ccbam::ops {

template <typename T>
using MatRM = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MapRM = Eigen::Map<MatRM<T>>;
template <typename T>
using CMapRM = Eigen::Map<const MatRM<T>>;

static void check_conv_geom(const ConvGeom& g) {
    if (g.stride_h < 1 || g.stride_w < 1)
        shape_error("conv2d", "stride must be >= 1 on each axis");
    if (g.pad_h < 0 || g.pad_w < 0) shape_error("conv2d", "negative padding");
    if (g.out_pad_h >= g.stride_h || g.out_pad_w >= g.stride_w || g.out_pad_h < 0 ||
        g.out_pad_w < 0)
        shape_error("deconv2d", "output padding must be in [0, stride)");
}

Shape4 corr2d_out_shape(const Shape4& x, const Shape4& k, const ConvGeom& g) {
    check_conv_geom(g);
    if (x.c != k.c)
        shape_error("conv2d", "input channels " + std::to_string(x.c) +
                                  " != kernel channels " + std::to_string(k.c));
    long eh = x.h + 2 * g.pad_h, ew = x.w + 2 * g.pad_w;
    if (eh < k.h || ew < k.w)
        shape_error("conv2d", "padded input " + std::to_string(eh) + "x" + std::to_string(ew) +
                                  " smaller than kernel " + std::to_string(k.h) + "x" +
                                  std::to_string(k.w));
    return Shape4{x.b, k.b, (eh - k.h) / g.stride_h + 1, (ew - k.w) / g.stride_w + 1};
}

Shape4 deconv2d_out_shape(const Shape4& x, const Shape4& k, const ConvGeom& g) {
    check_conv_geom(g);
    if (x.c != k.b)
        shape_error("deconv2d", "input channels " + std::to_string(x.c) +
                                    " != kernel input channels " + std::to_string(k.b));
    long oh = (x.h - 1) * g.stride_h + k.h - 2 * g.pad_h + g.out_pad_h;
    long ow = (x.w - 1) * g.stride_w + k.w - 2 * g.pad_w + g.out_pad_w;
    if (oh < 1 || ow < 1)
        shape_error("deconv2d", "non-positive output " + std::to_string(oh) + "x" +
                                    std::to_string(ow));
    return Shape4{x.b, k.c, oh, ow};
}

// Patch matrix (c_in*kh*kw rows, oh*ow cols) for one batch item.
template <typename T>
static void im2col(const Tensor<T>& x, long b, const Shape4& k, const ConvGeom& g,
                   long oh_n, long ow_n, MatRM<T>& patches) {
    const Shape4& xs = x.shape;
    for (long ci = 0; ci < xs.c; ++ci) {
        for (long ky = 0; ky < k.h; ++ky) {
            for (long kx = 0; kx < k.w; ++kx) {
                long row = (ci * k.h + ky) * k.w + kx;
                T* dst = patches.data() + row * oh_n * ow_n;
                for (long oh = 0; oh < oh_n; ++oh) {
                    long ih = oh * g.stride_h + ky - g.pad_h;
                    if (ih < 0 || ih >= xs.h) {
                        std::fill(dst, dst + ow_n, T(0));
                        dst += ow_n;
                        continue;
                    }
                    const T* src = x.data.data() + xs.index(b, ci, ih, 0);
                    for (long ow = 0; ow < ow_n; ++ow) {
                        long iw = ow * g.stride_w + kx - g.pad_w;
                        *dst++ = (iw < 0 || iw >= xs.w) ? T(0) : src[iw];
                    }
                }
            }
        }
    }
}

// Scatter-add of a patch matrix back onto the input plane; adjoint of im2col.
template <typename T>
static void col2im(const MatRM<T>& cols, long b, const Shape4& k, const ConvGeom& g,
                   long oh_n, long ow_n, Tensor<T>& gx) {
    const Shape4& xs = gx.shape;
    for (long ci = 0; ci < xs.c; ++ci) {
        for (long ky = 0; ky < k.h; ++ky) {
            for (long kx = 0; kx < k.w; ++kx) {
                long row = (ci * k.h + ky) * k.w + kx;
                const T* src = cols.data() + row * oh_n * ow_n;
                for (long oh = 0; oh < oh_n; ++oh) {
                    long ih = oh * g.stride_h + ky - g.pad_h;
                    if (ih >= 0 && ih < xs.h) {
                        T* dst = gx.data.data() + xs.index(b, ci, ih, 0);
                        for (long ow = 0; ow < ow_n; ++ow) {
                            long iw = ow * g.stride_w + kx - g.pad_w;
                            if (iw >= 0 && iw < xs.w) dst[iw] += src[ow];
                        }
                    }
                    src += ow_n;
                }
            }
        }
    }
}

template <typename T>
Tensor<T> corr2d(const Tensor<T>& x, const Tensor<T>& k, const ConvGeom& g) {
    Shape4 os = corr2d_out_shape(x.shape, k.shape, g);
    Tensor<T> out(os);
    long patch = k.shape.c * k.shape.h * k.shape.w;
    long cols = os.h * os.w;
    CMapRM<T> km(k.data.data(), k.shape.b, patch);
    parallel_for(x.shape.b, [&](long b0, long b1) {
        MatRM<T> patches(patch, cols);
        for (long b = b0; b < b1; ++b) {
            im2col(x, b, k.shape, g, os.h, os.w, patches);
            MapRM<T> om(out.data.data() + b * os.c * cols, os.c, cols);
            om.noalias() = km * patches;
        }
    });
    return out;
}

template <typename T>
Tensor<T> corr2d_input_grad(const Tensor<T>& gy, const Tensor<T>& k, const ConvGeom& g,
                            const Shape4& x_shape) {
    Tensor<T> gx(x_shape);
    long patch = k.shape.c * k.shape.h * k.shape.w;
    long cols = gy.shape.h * gy.shape.w;
    CMapRM<T> km(k.data.data(), k.shape.b, patch);
    parallel_for(gy.shape.b, [&](long b0, long b1) {
        MatRM<T> colbuf(patch, cols);
        for (long b = b0; b < b1; ++b) {
            CMapRM<T> gym(gy.data.data() + b * gy.shape.c * cols, gy.shape.c, cols);
            colbuf.noalias() = km.transpose() * gym;
            col2im(colbuf, b, k.shape, g, gy.shape.h, gy.shape.w, gx);
        }
    });
    return gx;
}

template <typename T>
Tensor<T> corr2d_kernel_grad(const Tensor<T>& x, const Tensor<T>& gy, const ConvGeom& g,
                             const Shape4& k_shape) {
    Tensor<T> gk(k_shape);
    long patch = k_shape.c * k_shape.h * k_shape.w;
    long cols = gy.shape.h * gy.shape.w;
    MapRM<T> gkm(gk.data.data(), k_shape.b, patch);
    MatRM<T> patches(patch, cols);
    for (long b = 0; b < x.shape.b; ++b) {
        im2col(x, b, k_shape, g, gy.shape.h, gy.shape.w, patches);
        CMapRM<T> gym(gy.data.data() + b * gy.shape.c * cols, gy.shape.c, cols);
        gkm.noalias() += gym * patches.transpose();
    }
    return gk;
}

template <typename T>
Tensor<T> deconv2d(const Tensor<T>& x, const Tensor<T>& k, const ConvGeom& g) {
    // Transposed correlation: scatter each input position through the kernel.
    // Implemented as the adjoint of corr2d with the kernel read as
    // (c_out = k.b, c_in = k.c).
    Shape4 os = deconv2d_out_shape(x.shape, k.shape, g);
    return corr2d_input_grad(x, k, g, os);
}

template <typename T>
Tensor<T> deconv2d_input_grad(const Tensor<T>& gy, const Tensor<T>& k, const ConvGeom& g,
                              const Shape4& x_shape) {
    Tensor<T> gx = corr2d(gy, k, g);
    if (gx.shape != x_shape)
        shape_error("deconv2d", "input grad shape " + gx.shape.str() + " != input " +
                                    x_shape.str());
    return gx;
}

template <typename T>
Tensor<T> deconv2d_kernel_grad(const Tensor<T>& x, const Tensor<T>& gy, const ConvGeom& g,
                               const Shape4& k_shape) {
    return corr2d_kernel_grad(gy, x, g, k_shape);
}

template <typename T>
Tensor<T> matmul(const Tensor<T>& x, const Tensor<T>& w) {
    if (w.shape.h != 1 || w.shape.w != 1 || x.shape.h != 1 || x.shape.w != 1)
        shape_error("dense", "expects (B,N,1,1) input and (M,N,1,1) weights");
    if (x.shape.c != w.shape.c)
        shape_error("dense", "input length " + std::to_string(x.shape.c) +
                                 " != weight columns " + std::to_string(w.shape.c));
    Tensor<T> out(Shape4{x.shape.b, w.shape.b, 1, 1});
    CMapRM<T> xm(x.data.data(), x.shape.b, x.shape.c);
    CMapRM<T> wm(w.data.data(), w.shape.b, w.shape.c);
    MapRM<T> om(out.data.data(), x.shape.b, w.shape.b);
    om.noalias() = xm * wm.transpose();
    return out;
}

template <typename T>
Tensor<T> matmul_input_grad(const Tensor<T>& gy, const Tensor<T>& w) {
    Tensor<T> gx(Shape4{gy.shape.b, w.shape.c, 1, 1});
    CMapRM<T> gym(gy.data.data(), gy.shape.b, gy.shape.c);
    CMapRM<T> wm(w.data.data(), w.shape.b, w.shape.c);
    MapRM<T> gxm(gx.data.data(), gx.shape.b, gx.shape.c);
    gxm.noalias() = gym * wm;
    return gx;
}

template <typename T>
Tensor<T> matmul_weight_grad(const Tensor<T>& x, const Tensor<T>& gy) {
    Tensor<T> gw(Shape4{gy.shape.c, x.shape.c, 1, 1});
    CMapRM<T> xm(x.data.data(), x.shape.b, x.shape.c);
    CMapRM<T> gym(gy.data.data(), gy.shape.b, gy.shape.c);
    MapRM<T> gwm(gw.data.data(), gw.shape.b, gw.shape.c);
    gwm.noalias() = gym.transpose() * xm;
    return gw;
}

template <typename T, typename F>
static Tensor<T> map_tensor(const Tensor<T>& x, F f) {
    Tensor<T> out(x.shape);
    for (size_t i = 0; i < x.data.size(); ++i) out.data[i] = f(x.data[i]);
    return out;
}

template <typename T> Tensor<T> relu(const Tensor<T>& x) {
    return map_tensor(x, [](T v) { return v > T(0) ? v : T(0); });
}
template <typename T> Tensor<T> leaky_relu(const Tensor<T>& x, T slope) {
    return map_tensor(x, [slope](T v) { return v > T(0) ? v : slope * v; });
}
template <typename T> Tensor<T> sigmoid(const Tensor<T>& x) {
    return map_tensor(x, [](T v) { return T(1) / (T(1) + std::exp(-v)); });
}
template <typename T> Tensor<T> tanh_map(const Tensor<T>& x) {
    return map_tensor(x, [](T v) { return std::tanh(v); });
}
template <typename T> Tensor<T> log_map(const Tensor<T>& x) {
    return map_tensor(x, [](T v) { return std::log(v); });
}
template <typename T> Tensor<T> sqrt_map(const Tensor<T>& x) {
    return map_tensor(x, [](T v) { return std::sqrt(v); });
}
template <typename T> Tensor<T> clamp_min(const Tensor<T>& x, T floor) {
    return map_tensor(x, [floor](T v) { return v < floor ? floor : v; });
}
template <typename T> Tensor<T> scale(const Tensor<T>& x, T c) {
    return map_tensor(x, [c](T v) { return c * v; });
}
template <typename T> Tensor<T> add_const(const Tensor<T>& x, T c) {
    return map_tensor(x, [c](T v) { return v + c; });
}

static Shape4 broadcast_shape(const Shape4& a, const Shape4& b, const char* op) {
    auto axis = [&](long x, long y) {
        if (x == y) return x;
        if (x == 1) return y;
        if (y == 1) return x;
        shape_error(op, "shapes " + a.str() + " and " + b.str() + " not broadcastable");
    };
    return Shape4{axis(a.b, b.b), axis(a.c, b.c), axis(a.h, b.h), axis(a.w, b.w)};
}

template <typename T, typename F>
static Tensor<T> binary_op(const Tensor<T>& a, const Tensor<T>& b, const char* name, F f) {
    if (a.shape == b.shape) {
        Tensor<T> out(a.shape);
        for (size_t i = 0; i < a.data.size(); ++i) out.data[i] = f(a.data[i], b.data[i]);
        return out;
    }
    Shape4 os = broadcast_shape(a.shape, b.shape, name);
    Tensor<T> out(os);
    const Shape4 &as = a.shape, &bs = b.shape;
    long i = 0;
    for (long ib = 0; ib < os.b; ++ib)
        for (long ic = 0; ic < os.c; ++ic)
            for (long ih = 0; ih < os.h; ++ih)
                for (long iw = 0; iw < os.w; ++iw)
                    out.data[i++] =
                        f(a.at(std::min(ib, as.b - 1), std::min(ic, as.c - 1),
                               std::min(ih, as.h - 1), std::min(iw, as.w - 1)),
                          b.at(std::min(ib, bs.b - 1), std::min(ic, bs.c - 1),
                               std::min(ih, bs.h - 1), std::min(iw, bs.w - 1)));
    return out;
}

template <typename T> Tensor<T> add(const Tensor<T>& a, const Tensor<T>& b) {
    return binary_op(a, b, "add", [](T x, T y) { return x + y; });
}
template <typename T> Tensor<T> sub(const Tensor<T>& a, const Tensor<T>& b) {
    return binary_op(a, b, "sub", [](T x, T y) { return x - y; });
}
template <typename T> Tensor<T> mul(const Tensor<T>& a, const Tensor<T>& b) {
    return binary_op(a, b, "mul", [](T x, T y) { return x * y; });
}
template <typename T> Tensor<T> div(const Tensor<T>& a, const Tensor<T>& b) {
    return binary_op(a, b, "div", [](T x, T y) { return x / y; });
}

template <typename T>
Tensor<T> reduce_to_shape(const Tensor<T>& g, const Shape4& target) {
    if (g.shape == target) return g;
    Tensor<T> out(target);
    const Shape4& gs = g.shape;
    long i = 0;
    for (long ib = 0; ib < gs.b; ++ib)
        for (long ic = 0; ic < gs.c; ++ic)
            for (long ih = 0; ih < gs.h; ++ih)
                for (long iw = 0; iw < gs.w; ++iw)
                    out.at(std::min(ib, target.b - 1), std::min(ic, target.c - 1),
                           std::min(ih, target.h - 1), std::min(iw, target.w - 1)) +=
                        g.data[i++];
    return out;
}

template <typename T>
Tensor<T> global_avg_pool(const Tensor<T>& x) {
    const Shape4& s = x.shape;
    Tensor<T> out(Shape4{s.b, s.c, 1, 1});
    long hw = s.h * s.w;
    for (long b = 0; b < s.b; ++b)
        for (long c = 0; c < s.c; ++c) {
            const T* p = x.data.data() + s.index(b, c, 0, 0);
            T acc = 0;
            for (long i = 0; i < hw; ++i) acc += p[i];
            out.at(b, c, 0, 0) = acc / static_cast<T>(hw);
        }
    return out;
}

template <typename T>
Tensor<T> global_max_pool(const Tensor<T>& x, std::vector<long>* argmax) {
    const Shape4& s = x.shape;
    Tensor<T> out(Shape4{s.b, s.c, 1, 1});
    long hw = s.h * s.w;
    if (argmax) argmax->assign(static_cast<size_t>(s.b * s.c), 0);
    for (long b = 0; b < s.b; ++b)
        for (long c = 0; c < s.c; ++c) {
            const T* p = x.data.data() + s.index(b, c, 0, 0);
            T best = p[0];
            long best_i = 0;
            for (long i = 1; i < hw; ++i)
                if (p[i] > best) { best = p[i]; best_i = i; }
            out.at(b, c, 0, 0) = best;
            if (argmax) (*argmax)[static_cast<size_t>(b * s.c + c)] = best_i;
        }
    return out;
}

template <typename T>
Tensor<T> channel_avg_pool(const Tensor<T>& x) {
    const Shape4& s = x.shape;
    Tensor<T> out(Shape4{s.b, 1, s.h, s.w});
    long hw = s.h * s.w;
    for (long b = 0; b < s.b; ++b) {
        T* o = out.data.data() + out.shape.index(b, 0, 0, 0);
        for (long c = 0; c < s.c; ++c) {
            const T* p = x.data.data() + s.index(b, c, 0, 0);
            for (long i = 0; i < hw; ++i) o[i] += p[i];
        }
        for (long i = 0; i < hw; ++i) o[i] /= static_cast<T>(s.c);
    }
    return out;
}

template <typename T>
Tensor<T> channel_max_pool(const Tensor<T>& x, std::vector<long>* argmax) {
    const Shape4& s = x.shape;
    Tensor<T> out(Shape4{s.b, 1, s.h, s.w});
    long hw = s.h * s.w;
    if (argmax) argmax->assign(static_cast<size_t>(s.b * hw), 0);
    for (long b = 0; b < s.b; ++b) {
        T* o = out.data.data() + out.shape.index(b, 0, 0, 0);
        const T* first = x.data.data() + s.index(b, 0, 0, 0);
        std::copy(first, first + hw, o);
        for (long c = 1; c < s.c; ++c) {
            const T* p = x.data.data() + s.index(b, c, 0, 0);
            for (long i = 0; i < hw; ++i)
                if (p[i] > o[i]) {
                    o[i] = p[i];
                    if (argmax) (*argmax)[static_cast<size_t>(b * hw + i)] = c;
                }
        }
    }
    return out;
}

template <typename T>
Tensor<T> concat_channels(const Tensor<T>& a, const Tensor<T>& b) {
    if (a.shape.b != b.shape.b || a.shape.h != b.shape.h || a.shape.w != b.shape.w)
        shape_error("concat_channels", a.shape.str() + " vs " + b.shape.str());
    Tensor<T> out(Shape4{a.shape.b, a.shape.c + b.shape.c, a.shape.h, a.shape.w});
    long chw_a = a.shape.c * a.shape.h * a.shape.w;
    long chw_b = b.shape.c * b.shape.h * b.shape.w;
    for (long ib = 0; ib < a.shape.b; ++ib) {
        std::copy(a.data.begin() + ib * chw_a, a.data.begin() + (ib + 1) * chw_a,
                  out.data.begin() + ib * (chw_a + chw_b));
        std::copy(b.data.begin() + ib * chw_b, b.data.begin() + (ib + 1) * chw_b,
                  out.data.begin() + ib * (chw_a + chw_b) + chw_a);
    }
    return out;
}

template <typename T>
Tensor<T> slice_channels(const Tensor<T>& x, long c0, long c1) {
    const Shape4& s = x.shape;
    if (c0 < 0 || c1 > s.c || c0 >= c1)
        shape_error("slice_channels", "range [" + std::to_string(c0) + "," +
                                          std::to_string(c1) + ") of " + s.str());
    Tensor<T> out(Shape4{s.b, c1 - c0, s.h, s.w});
    long hw = s.h * s.w;
    for (long b = 0; b < s.b; ++b)
        std::copy(x.data.begin() + s.index(b, c0, 0, 0),
                  x.data.begin() + s.index(b, c0, 0, 0) + (c1 - c0) * hw,
                  out.data.begin() + out.shape.index(b, 0, 0, 0));
    return out;
}

template <typename T>
Tensor<T> pad2d(const Tensor<T>& x, long h0, long h1, long w0, long w1) {
    const Shape4& s = x.shape;
    Tensor<T> out(Shape4{s.b, s.c, s.h + h0 + h1, s.w + w0 + w1});
    for (long b = 0; b < s.b; ++b)
        for (long c = 0; c < s.c; ++c)
            for (long h = 0; h < s.h; ++h)
                std::copy(x.data.begin() + s.index(b, c, h, 0),
                          x.data.begin() + s.index(b, c, h, 0) + s.w,
                          out.data.begin() + out.shape.index(b, c, h + h0, w0));
    return out;
}

template <typename T>
Tensor<T> crop2d(const Tensor<T>& x, long h0, long h1, long w0, long w1) {
    const Shape4& s = x.shape;
    if (s.h - h0 - h1 < 1 || s.w - w0 - w1 < 1)
        shape_error("crop2d", "crop exceeds extent " + s.str());
    Tensor<T> out(Shape4{s.b, s.c, s.h - h0 - h1, s.w - w0 - w1});
    for (long b = 0; b < s.b; ++b)
        for (long c = 0; c < s.c; ++c)
            for (long h = 0; h < out.shape.h; ++h)
                std::copy(x.data.begin() + s.index(b, c, h + h0, w0),
                          x.data.begin() + s.index(b, c, h + h0, w0) + out.shape.w,
                          out.data.begin() + out.shape.index(b, c, h, 0));
    return out;
}

template <typename T>
Tensor<T> reshape(const Tensor<T>& x, const Shape4& s) {
    if (s.count() != x.count())
        shape_error("reshape", x.shape.str() + " -> " + s.str() + " changes element count");
    Tensor<T> out = x;
    out.shape = s;
    return out;
}

template <typename T>
Tensor<T> slice_w(const Tensor<T>& x, long w0, long w1) {
    const Shape4& s = x.shape;
    if (w0 < 0 || w1 > s.w || w0 >= w1)
        shape_error("slice_w", "range [" + std::to_string(w0) + "," + std::to_string(w1) +
                                   ") of " + s.str());
    Tensor<T> out(Shape4{s.b, s.c, s.h, w1 - w0});
    for (long b = 0; b < s.b; ++b)
        for (long c = 0; c < s.c; ++c)
            for (long h = 0; h < s.h; ++h)
                std::copy(x.data.begin() + s.index(b, c, h, w0),
                          x.data.begin() + s.index(b, c, h, w0) + (w1 - w0),
                          out.data.begin() + out.shape.index(b, c, h, 0));
    return out;
}

template <typename T>
Tensor<T> concat_w(const std::vector<Tensor<T>>& parts) {
    if (parts.empty()) shape_error("concat_w", "no parts");
    Shape4 s = parts[0].shape;
    long total_w = 0;
    for (const auto& p : parts) {
        if (p.shape.b != s.b || p.shape.c != s.c || p.shape.h != s.h)
            shape_error("concat_w", s.str() + " vs " + p.shape.str());
        total_w += p.shape.w;
    }
    Tensor<T> out(Shape4{s.b, s.c, s.h, total_w});
    long off = 0;
    for (const auto& p : parts) {
        for (long b = 0; b < s.b; ++b)
            for (long c = 0; c < s.c; ++c)
                for (long h = 0; h < s.h; ++h)
                    std::copy(p.data.begin() + p.shape.index(b, c, h, 0),
                              p.data.begin() + p.shape.index(b, c, h, 0) + p.shape.w,
                              out.data.begin() + out.shape.index(b, c, h, off));
        off += p.shape.w;
    }
    return out;
}

template <typename T>
T sum_all(const Tensor<T>& x) {
    T acc = 0;
    for (T v : x.data) acc += v;
    return acc;
}

template <typename T>
Tensor<T> sum_per_batch(const Tensor<T>& x) {
    const Shape4& s = x.shape;
    Tensor<T> out(Shape4{s.b, 1, 1, 1});
    long chw = s.c * s.h * s.w;
    for (long b = 0; b < s.b; ++b) {
        const T* p = x.data.data() + b * chw;
        T acc = 0;
        for (long i = 0; i < chw; ++i) acc += p[i];
        out.data[static_cast<size_t>(b)] = acc;
    }
    return out;
}

template <typename T>
Tensor<T> mean_over_bhw(const Tensor<T>& x) {
    const Shape4& s = x.shape;
    Tensor<T> out(Shape4{1, s.c, 1, 1});
    for (long c = 0; c < s.c; ++c) {
        T acc = 0;
        for (long b = 0; b < s.b; ++b) {
            const T* p = x.data.data() + s.index(b, c, 0, 0);
            for (long i = 0; i < s.h * s.w; ++i) acc += p[i];
        }
        out.data[static_cast<size_t>(c)] = acc / static_cast<T>(s.b * s.h * s.w);
    }
    return out;
}

#define CCBAM_INSTANTIATE_OPS(T)                                                          \
    template Tensor<T> corr2d<T>(const Tensor<T>&, const Tensor<T>&, const ConvGeom&);   \
    template Tensor<T> corr2d_input_grad<T>(const Tensor<T>&, const Tensor<T>&,          \
                                            const ConvGeom&, const Shape4&);             \
    template Tensor<T> corr2d_kernel_grad<T>(const Tensor<T>&, const Tensor<T>&,         \
                                             const ConvGeom&, const Shape4&);            \
    template Tensor<T> deconv2d<T>(const Tensor<T>&, const Tensor<T>&, const ConvGeom&); \
    template Tensor<T> deconv2d_input_grad<T>(const Tensor<T>&, const Tensor<T>&,        \
                                              const ConvGeom&, const Shape4&);           \
    template Tensor<T> deconv2d_kernel_grad<T>(const Tensor<T>&, const Tensor<T>&,       \
                                               const ConvGeom&, const Shape4&);          \
    template Tensor<T> matmul<T>(const Tensor<T>&, const Tensor<T>&);                    \
    template Tensor<T> matmul_input_grad<T>(const Tensor<T>&, const Tensor<T>&);         \
    template Tensor<T> matmul_weight_grad<T>(const Tensor<T>&, const Tensor<T>&);        \
    template Tensor<T> relu<T>(const Tensor<T>&);                                        \
    template Tensor<T> leaky_relu<T>(const Tensor<T>&, T);                               \
    template Tensor<T> sigmoid<T>(const Tensor<T>&);                                     \
    template Tensor<T> tanh_map<T>(const Tensor<T>&);                                    \
    template Tensor<T> log_map<T>(const Tensor<T>&);                                     \
    template Tensor<T> sqrt_map<T>(const Tensor<T>&);                                    \
    template Tensor<T> clamp_min<T>(const Tensor<T>&, T);                                \
    template Tensor<T> scale<T>(const Tensor<T>&, T);                                    \
    template Tensor<T> add_const<T>(const Tensor<T>&, T);                                \
    template Tensor<T> add<T>(const Tensor<T>&, const Tensor<T>&);                       \
    template Tensor<T> sub<T>(const Tensor<T>&, const Tensor<T>&);                       \
    template Tensor<T> mul<T>(const Tensor<T>&, const Tensor<T>&);                       \
    template Tensor<T> div<T>(const Tensor<T>&, const Tensor<T>&);                       \
    template Tensor<T> reduce_to_shape<T>(const Tensor<T>&, const Shape4&);              \
    template Tensor<T> global_avg_pool<T>(const Tensor<T>&);                             \
    template Tensor<T> global_max_pool<T>(const Tensor<T>&, std::vector<long>*);         \
    template Tensor<T> channel_avg_pool<T>(const Tensor<T>&);                            \
    template Tensor<T> channel_max_pool<T>(const Tensor<T>&, std::vector<long>*);        \
    template Tensor<T> concat_channels<T>(const Tensor<T>&, const Tensor<T>&);           \
    template Tensor<T> slice_channels<T>(const Tensor<T>&, long, long);                  \
    template Tensor<T> pad2d<T>(const Tensor<T>&, long, long, long, long);               \
    template Tensor<T> crop2d<T>(const Tensor<T>&, long, long, long, long);              \
    template Tensor<T> reshape<T>(const Tensor<T>&, const Shape4&);                      \
    template Tensor<T> slice_w<T>(const Tensor<T>&, long, long);                         \
    template Tensor<T> concat_w<T>(const std::vector<Tensor<T>>&);                       \
    template T sum_all<T>(const Tensor<T>&);                                             \
    template Tensor<T> sum_per_batch<T>(const Tensor<T>&);                               \
    template Tensor<T> mean_over_bhw<T>(const Tensor<T>&);

CCBAM_INSTANTIATE_OPS(float)
CCBAM_INSTANTIATE_OPS(double)

}  // namespace ccbam::ops
