#include "ccbam/attention.hpp"

namespace ccbam::attn {

using layers::PoolAxes;

template <typename T>
CVar<T> channel_attention(CVar<T> u, CVar<T> w1, CVar<T> w2) {
    auto branch = [&](CVar<T> pooled) {
        CVar<T> h = layers::complex_relu(layers::complex_dense(pooled, w1));
        return layers::complex_sigmoid(layers::complex_dense(h, w2));
    };
    CVar<T> via_avg = branch(layers::pool_avg(u, PoolAxes::spatial));
    CVar<T> via_max = branch(layers::pool_max(u, PoolAxes::spatial));
    return layers::cadd(via_avg, via_max);
}

template <typename T>
CVar<T> spatial_attention(CVar<T> u, CVar<T> f) {
    CVar<T> avg = layers::pool_avg(u, PoolAxes::channel);
    CVar<T> mx = layers::pool_max(u, PoolAxes::channel);
    CVar<T> cat = layers::cconcat_channels(avg, mx);
    ops::ConvGeom g{1, 1, 3, 3, 0, 0};
    return layers::complex_sigmoid(layers::complex_conv2d(cat, f, g));
}

template <typename T>
CVar<T> ccbam(CVar<T> u, const AttentionRefs<T>& p) {
    CVar<T> after_channel = layers::apply_gate(u, channel_attention(u, p.w1, p.w2));
    return layers::apply_gate(after_channel,
                              spatial_attention(after_channel, p.f));
}

template <typename T>
void add_attention_params(ParamStore<T>& store, const std::string& base, long channels,
                          long r, Rng& rng) {
    if (r <= 0 || channels % r != 0)
        shape_error("add_attention_params",
                    "reduction ratio " + std::to_string(r) + " must divide channels " +
                        std::to_string(channels));
    long mid = channels / r;
    store.add_complex(base + ".w1", complex_glorot_uniform<T>(
                                        rng, Shape4{mid, channels, 1, 1}, channels, mid));
    store.add_complex(base + ".w2", complex_glorot_uniform<T>(
                                        rng, Shape4{channels, mid, 1, 1}, mid, channels));
    store.add_complex(base + ".f",
                      complex_glorot_uniform<T>(rng, Shape4{1, 2, 7, 7}, 2 * 49, 49));
}

template <typename T>
AttentionRefs<T> bind_attention(GraphBinding<T>& bind, const std::string& base) {
    return AttentionRefs<T>{bind.complex(base + ".w1"), bind.complex(base + ".w2"),
                            bind.complex(base + ".f")};
}

#define CCBAM_INSTANTIATE_ATTN(T)                                                      \
    template CVar<T> channel_attention<T>(CVar<T>, CVar<T>, CVar<T>);                  \
    template CVar<T> spatial_attention<T>(CVar<T>, CVar<T>);                           \
    template CVar<T> ccbam<T>(CVar<T>, const AttentionRefs<T>&);                       \
    template void add_attention_params<T>(ParamStore<T>&, const std::string&, long,    \
                                          long, Rng&);                                 \
    template AttentionRefs<T> bind_attention<T>(GraphBinding<T>&, const std::string&);

CCBAM_INSTANTIATE_ATTN(float)
CCBAM_INSTANTIATE_ATTN(double)

}  // namespace ccbam::attn
