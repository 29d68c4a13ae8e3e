#ifndef CCBAM_TESTS_ORACLES_HPP
#define CCBAM_TESTS_ORACLES_HPP

// Independent reference implementations used only by tests. Everything here
// is written as plain nested loops so it shares no code with the library.

#include <cmath>
#include <complex>
#include <vector>

#include "ccbam/autograd.hpp"
#include "ccbam/ops.hpp"
#include "ccbam/rng.hpp"
#include "ccbam/tensor.hpp"

namespace oracles {

using ccbam::Shape4;
using ccbam::Tensor;
using ccbam::ops::ConvGeom;

inline Tensor<double> corr2d_loops(const Tensor<double>& x, const Tensor<double>& k,
                                   const ConvGeom& g) {
    Shape4 os = ccbam::ops::corr2d_out_shape(x.shape, k.shape, g);
    Tensor<double> y(os);
    for (long b = 0; b < os.b; ++b)
        for (long co = 0; co < os.c; ++co)
            for (long oh = 0; oh < os.h; ++oh)
                for (long ow = 0; ow < os.w; ++ow) {
                    double acc = 0;
                    for (long ci = 0; ci < x.shape.c; ++ci)
                        for (long kh = 0; kh < k.shape.h; ++kh)
                            for (long kw = 0; kw < k.shape.w; ++kw) {
                                long ih = oh * g.stride_h - g.pad_h + kh;
                                long iw = ow * g.stride_w - g.pad_w + kw;
                                if (ih < 0 || ih >= x.shape.h || iw < 0 || iw >= x.shape.w)
                                    continue;
                                acc += x.at(b, ci, ih, iw) * k.at(co, ci, kh, kw);
                            }
                    y.at(b, co, oh, ow) = acc;
                }
    return y;
}

inline Tensor<double> deconv2d_loops(const Tensor<double>& x, const Tensor<double>& k,
                                     const ConvGeom& g) {
    Shape4 os = ccbam::ops::deconv2d_out_shape(x.shape, k.shape, g);
    Tensor<double> y(os);
    for (long b = 0; b < x.shape.b; ++b)
        for (long ci = 0; ci < x.shape.c; ++ci)
            for (long ih = 0; ih < x.shape.h; ++ih)
                for (long iw = 0; iw < x.shape.w; ++iw)
                    for (long co = 0; co < os.c; ++co)
                        for (long kh = 0; kh < k.shape.h; ++kh)
                            for (long kw = 0; kw < k.shape.w; ++kw) {
                                long oh = ih * g.stride_h - g.pad_h + kh;
                                long ow = iw * g.stride_w - g.pad_w + kw;
                                if (oh < 0 || oh >= os.h || ow < 0 || ow >= os.w)
                                    continue;
                                y.at(b, co, oh, ow) +=
                                    x.at(b, ci, ih, iw) * k.at(ci, co, kh, kw);
                            }
    return y;
}

inline Tensor<double> matmul_loops(const Tensor<double>& x, const Tensor<double>& w) {
    Tensor<double> y(Shape4{x.shape.b, w.shape.b, 1, 1});
    for (long b = 0; b < x.shape.b; ++b)
        for (long m = 0; m < w.shape.b; ++m) {
            double acc = 0;
            for (long n = 0; n < x.shape.c; ++n)
                acc += x.at(b, n, 0, 0) * w.at(m, n, 0, 0);
            y.at(b, m, 0, 0) = acc;
        }
    return y;
}

// Complex 2-D cross-correlation straight from the product rule:
//   out = (xr*kr - xi*ki) + j (xr*ki + xi*kr)
inline ccbam::CTensor<double> complex_corr2d_loops(const ccbam::CTensor<double>& x,
                                                   const ccbam::CTensor<double>& k,
                                                   const ConvGeom& g) {
    Tensor<double> rr = corr2d_loops(x.re, k.re, g);
    Tensor<double> ii = corr2d_loops(x.im, k.im, g);
    Tensor<double> ri = corr2d_loops(x.re, k.im, g);
    Tensor<double> ir = corr2d_loops(x.im, k.re, g);
    Tensor<double> re(rr.shape), im(rr.shape);
    for (size_t i = 0; i < re.data.size(); ++i) {
        re.data[i] = rr.data[i] - ii.data[i];
        im.data[i] = ri.data[i] + ir.data[i];
    }
    return {re, im};
}

// Full-resolution DFT of a short real signal: X[f] = sum_n x[n] e^{-j 2 pi f n / N}.
inline std::vector<std::complex<double>> naive_dft(const std::vector<double>& x) {
    size_t n = x.size();
    std::vector<std::complex<double>> out(n);
    for (size_t f = 0; f < n; ++f) {
        std::complex<double> acc(0, 0);
        for (size_t t = 0; t < n; ++t) {
            double ang = -2.0 * M_PI * static_cast<double>(f * t) / static_cast<double>(n);
            acc += x[t] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        out[f] = acc;
    }
    return out;
}

inline ccbam::CTensor<double> complex_deconv2d_loops(const ccbam::CTensor<double>& x,
                                                     const ccbam::CTensor<double>& k,
                                                     const ConvGeom& g) {
    Tensor<double> rr = deconv2d_loops(x.re, k.re, g);
    Tensor<double> ii = deconv2d_loops(x.im, k.im, g);
    Tensor<double> ri = deconv2d_loops(x.re, k.im, g);
    Tensor<double> ir = deconv2d_loops(x.im, k.re, g);
    Tensor<double> re(rr.shape), im(rr.shape);
    for (size_t i = 0; i < re.data.size(); ++i) {
        re.data[i] = rr.data[i] - ii.data[i];
        im.data[i] = ri.data[i] + ir.data[i];
    }
    return {re, im};
}

inline ccbam::CTensor<double> complex_matmul_loops(const ccbam::CTensor<double>& x,
                                                   const ccbam::CTensor<double>& w) {
    long bsz = x.shape().b, n = x.shape().c, m = w.shape().b;
    ccbam::CTensor<double> y = ccbam::CTensor<double>::zeros(Shape4{bsz, m, 1, 1});
    for (long b = 0; b < bsz; ++b)
        for (long r = 0; r < m; ++r) {
            std::complex<double> acc(0, 0);
            for (long c = 0; c < n; ++c)
                acc += std::complex<double>(x.re.at(b, c, 0, 0), x.im.at(b, c, 0, 0)) *
                       std::complex<double>(w.re.at(r, c, 0, 0), w.im.at(r, c, 0, 0));
            y.re.at(b, r, 0, 0) = acc.real();
            y.im.at(b, r, 0, 0) = acc.imag();
        }
    return y;
}

// Plain real LSTM step, gate chunk order i,f,g,o, row-major weights.
struct RealLstmRef {
    std::vector<double> h, c;
};
inline RealLstmRef real_lstm_reference(const std::vector<double>& wx,  // (4H x I)
                                       const std::vector<double>& wh,  // (4H x H)
                                       const std::vector<double>& b,   // (4H)
                                       const std::vector<double>& x,
                                       const std::vector<double>& h0,
                                       const std::vector<double>& c0, long hidden,
                                       long input) {
    auto sig = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
    std::vector<double> pre(static_cast<size_t>(4 * hidden), 0.0);
    for (long r = 0; r < 4 * hidden; ++r) {
        double acc = b[static_cast<size_t>(r)];
        for (long c = 0; c < input; ++c) acc += wx[static_cast<size_t>(r * input + c)] * x[static_cast<size_t>(c)];
        for (long c = 0; c < hidden; ++c) acc += wh[static_cast<size_t>(r * hidden + c)] * h0[static_cast<size_t>(c)];
        pre[static_cast<size_t>(r)] = acc;
    }
    RealLstmRef out;
    out.h.resize(static_cast<size_t>(hidden));
    out.c.resize(static_cast<size_t>(hidden));
    for (long j = 0; j < hidden; ++j) {
        double i = sig(pre[static_cast<size_t>(j)]);
        double f = sig(pre[static_cast<size_t>(hidden + j)]);
        double g = std::tanh(pre[static_cast<size_t>(2 * hidden + j)]);
        double o = sig(pre[static_cast<size_t>(3 * hidden + j)]);
        double cn = f * c0[static_cast<size_t>(j)] + i * g;
        out.c[static_cast<size_t>(j)] = cn;
        out.h[static_cast<size_t>(j)] = o * std::tanh(cn);
    }
    return out;
}

// Straight-line scalar evaluation of the channel-attention gate:
// sigma(W2 relu(W1 u_avg)) + sigma(W2 relu(W1 u_max)), pools per plane.
inline ccbam::CTensor<double> channel_attention_oracle(const ccbam::CTensor<double>& u,
                                                       const ccbam::CTensor<double>& w1,
                                                       const ccbam::CTensor<double>& w2) {
    using C = std::complex<double>;
    long bsz = u.shape().b, ch = u.shape().c, hh = u.shape().h, ww = u.shape().w;
    long mid = w1.shape().b;
    auto sig = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
    ccbam::CTensor<double> gate = ccbam::CTensor<double>::zeros(Shape4{bsz, ch, 1, 1});
    for (long b = 0; b < bsz; ++b) {
        std::vector<C> uavg(ch), umax(ch);
        for (long c = 0; c < ch; ++c) {
            double sr = 0, si = 0;
            double mr = u.re.at(b, c, 0, 0), mi = u.im.at(b, c, 0, 0);
            for (long h = 0; h < hh; ++h)
                for (long w = 0; w < ww; ++w) {
                    sr += u.re.at(b, c, h, w);
                    si += u.im.at(b, c, h, w);
                    mr = std::max(mr, u.re.at(b, c, h, w));
                    mi = std::max(mi, u.im.at(b, c, h, w));
                }
            uavg[static_cast<size_t>(c)] = C(sr / (hh * ww), si / (hh * ww));
            umax[static_cast<size_t>(c)] = C(mr, mi);
        }
        auto branch = [&](const std::vector<C>& p) {
            std::vector<C> hid(static_cast<size_t>(mid));
            for (long r = 0; r < mid; ++r) {
                C acc(0, 0);
                for (long c = 0; c < ch; ++c)
                    acc += C(w1.re.at(r, c, 0, 0), w1.im.at(r, c, 0, 0)) *
                           p[static_cast<size_t>(c)];
                hid[static_cast<size_t>(r)] =
                    C(std::max(0.0, acc.real()), std::max(0.0, acc.imag()));
            }
            std::vector<C> out(static_cast<size_t>(ch));
            for (long r = 0; r < ch; ++r) {
                C acc(0, 0);
                for (long c = 0; c < mid; ++c)
                    acc += C(w2.re.at(r, c, 0, 0), w2.im.at(r, c, 0, 0)) *
                           hid[static_cast<size_t>(c)];
                out[static_cast<size_t>(r)] = C(sig(acc.real()), sig(acc.imag()));
            }
            return out;
        };
        std::vector<C> ga = branch(uavg), gm = branch(umax);
        for (long c = 0; c < ch; ++c) {
            gate.re.at(b, c, 0, 0) = ga[static_cast<size_t>(c)].real() +
                                     gm[static_cast<size_t>(c)].real();
            gate.im.at(b, c, 0, 0) = ga[static_cast<size_t>(c)].imag() +
                                     gm[static_cast<size_t>(c)].imag();
        }
    }
    return gate;
}

// sigma(conv7x7(pad3, [channel-avg; channel-max])) evaluated with loops.
inline ccbam::CTensor<double> spatial_attention_oracle(const ccbam::CTensor<double>& u,
                                                       const ccbam::CTensor<double>& f) {
    long bsz = u.shape().b, ch = u.shape().c, hh = u.shape().h, ww = u.shape().w;
    ccbam::CTensor<double> pooled = ccbam::CTensor<double>::zeros(Shape4{bsz, 2, hh, ww});
    for (long b = 0; b < bsz; ++b)
        for (long h = 0; h < hh; ++h)
            for (long w = 0; w < ww; ++w) {
                double sr = 0, si = 0;
                double mr = u.re.at(b, 0, h, w), mi = u.im.at(b, 0, h, w);
                for (long c = 0; c < ch; ++c) {
                    sr += u.re.at(b, c, h, w);
                    si += u.im.at(b, c, h, w);
                    mr = std::max(mr, u.re.at(b, c, h, w));
                    mi = std::max(mi, u.im.at(b, c, h, w));
                }
                pooled.re.at(b, 0, h, w) = sr / ch;
                pooled.im.at(b, 0, h, w) = si / ch;
                pooled.re.at(b, 1, h, w) = mr;
                pooled.im.at(b, 1, h, w) = mi;
            }
    ccbam::CTensor<double> conv =
        complex_corr2d_loops(pooled, f, ConvGeom{1, 1, 3, 3, 0, 0});
    for (auto& v : conv.re.data) v = 1.0 / (1.0 + std::exp(-v));
    for (auto& v : conv.im.data) v = 1.0 / (1.0 + std::exp(-v));
    return conv;
}

inline double sum_dot(const Tensor<double>& a, const Tensor<double>& b) {
    double acc = 0;
    for (size_t i = 0; i < a.data.size(); ++i) acc += a.data[i] * b.data[i];
    return acc;
}

// Complex bilinear pairing sum_k a_k * b_k (no conjugation).
inline std::complex<double> cbilinear(const ccbam::CTensor<double>& a,
                                      const ccbam::CTensor<double>& b) {
    std::complex<double> acc(0, 0);
    for (size_t i = 0; i < a.re.data.size(); ++i)
        acc += std::complex<double>(a.re.data[i], a.im.data[i]) *
               std::complex<double>(b.re.data[i], b.im.data[i]);
    return acc;
}

inline ccbam::CTensor<double> rand_ctensor(ccbam::Rng& rng, Shape4 s, double lo = -1.0,
                                           double hi = 1.0) {
    ccbam::CTensor<double> t = ccbam::CTensor<double>::zeros(s);
    for (auto& v : t.re.data) v = ccbam::uniform(rng, lo, hi);
    for (auto& v : t.im.data) v = ccbam::uniform(rng, lo, hi);
    return t;
}

inline Tensor<double> rand_tensor(ccbam::Rng& rng, Shape4 s, double lo = -1.0,
                                  double hi = 1.0) {
    Tensor<double> t(s);
    for (auto& v : t.data) v = ccbam::uniform(rng, lo, hi);
    return t;
}

// Values bounded away from zero, for ops with a kink at the origin.
inline Tensor<double> rand_tensor_off_origin(ccbam::Rng& rng, Shape4 s,
                                             double margin = 0.1) {
    Tensor<double> t(s);
    for (auto& v : t.data) {
        double m = ccbam::uniform(rng, margin, 1.0);
        v = ccbam::uniform01(rng) < 0.5 ? -m : m;
    }
    return t;
}

struct GradCheckStats {
    double max_abs_err = 0;
    double max_rel_err = 0;
};

// Central-difference check of every input element against the reverse-mode
// gradient. `fn` rebuilds the scalar loss from fresh leaves each call.
template <typename LossFn>
GradCheckStats grad_check(const std::vector<Tensor<double>>& inputs, LossFn fn,
                          double step = 1e-5) {
    ccbam::Graph<double> g;
    std::vector<ccbam::Var<double>> vars;
    vars.reserve(inputs.size());
    for (const auto& t : inputs) vars.push_back(g.leaf(t, true));
    ccbam::Var<double> loss = fn(g, vars);
    g.backward(loss);

    auto eval = [&](const std::vector<Tensor<double>>& in2) {
        ccbam::Graph<double> g2;
        std::vector<ccbam::Var<double>> vs;
        vs.reserve(in2.size());
        for (const auto& t : in2) vs.push_back(g2.leaf(t, false));
        return g2.scalar(fn(g2, vs));
    };

    GradCheckStats st;
    std::vector<Tensor<double>> work = inputs;
    for (size_t vi = 0; vi < inputs.size(); ++vi) {
        const Tensor<double>& ag = g.grad(vars[vi]);
        for (size_t ei = 0; ei < inputs[vi].data.size(); ++ei) {
            double x0 = inputs[vi].data[ei];
            work[vi].data[ei] = x0 + step;
            double fp = eval(work);
            work[vi].data[ei] = x0 - step;
            double fm = eval(work);
            work[vi].data[ei] = x0;
            double num = (fp - fm) / (2 * step);
            double abs_err = std::abs(ag.data[ei] - num);
            double denom = std::max({std::abs(ag.data[ei]), std::abs(num), 1e-8});
            st.max_abs_err = std::max(st.max_abs_err, abs_err);
            st.max_rel_err = std::max(st.max_rel_err, abs_err / denom);
        }
    }
    return st;
}

}  // namespace oracles

#endif
