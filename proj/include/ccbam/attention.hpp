#ifndef CCBAM_ATTENTION_HPP
#define CCBAM_ATTENTION_HPP

#include "ccbam/layers.hpp"
#include "ccbam/params.hpp"

// Complex channel and spatial attention gates and their sequential
// composition. Gates recalibrate per plane: channel gate components lie in
// (0,2) (a sum of two sigmoids), spatial gate components in (0,1).

namespace ccbam::attn {

// Graph handles for one attention block's parameters.
//   w1: (C/r, C, 1, 1) complex, w2: (C, C/r, 1, 1) complex, shared between
//   the avg and max branches; f: (1, 2, 7, 7) complex, no biases anywhere.
template <typename T>
struct AttentionRefs {
    CVar<T> w1, w2, f;
};

// sigma(W2 relu(W1 U_avg)) + sigma(W2 relu(W1 U_max)) -> (B,C,1,1).
template <typename T>
CVar<T> channel_attention(CVar<T> u, CVar<T> w1, CVar<T> w2);

// sigma(conv7x7([avg_pool_c(U); max_pool_c(U)])) -> (B,1,H,W), padding 3.
template <typename T>
CVar<T> spatial_attention(CVar<T> u, CVar<T> f);

// Channel gate first, then spatial gate, both applied componentwise.
template <typename T>
CVar<T> ccbam(CVar<T> u, const AttentionRefs<T>& p);

// Registers one block's parameters under "<base>.w1/.w2/.f"; C must be
// divisible by r.
template <typename T>
void add_attention_params(ParamStore<T>& store, const std::string& base, long channels,
                          long r, Rng& rng);

template <typename T>
AttentionRefs<T> bind_attention(GraphBinding<T>& bind, const std::string& base);

// Real scalars added by one block: two FC planes of C^2/r each plus two
// 2-in-channel 7x7 conv planes.
inline long attention_param_count(long channels, long r) {
    return 2 * (2 * channels * channels / r) + 2 * (2 * 7 * 7);
}

}  // namespace ccbam::attn

#endif
