#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ccbam/attention.hpp"
#include "oracles.hpp"

using namespace ccbam;
using oracles::rand_ctensor;

namespace {

void require_close(const CTensor<double>& a, const CTensor<double>& b,
                   double tol = 1e-12) {
    REQUIRE(a.shape() == b.shape());
    for (size_t i = 0; i < a.re.data.size(); ++i) {
        REQUIRE(a.re.data[i] == doctest::Approx(b.re.data[i]).epsilon(tol).scale(1.0));
        REQUIRE(a.im.data[i] == doctest::Approx(b.im.data[i]).epsilon(tol).scale(1.0));
    }
}

attn::AttentionRefs<double> zero_refs(Graph<double>& g, long c, long r) {
    long mid = c / r;
    return attn::AttentionRefs<double>{
        g.leaf(CTensor<double>::zeros(Shape4{mid, c, 1, 1})),
        g.leaf(CTensor<double>::zeros(Shape4{c, mid, 1, 1})),
        g.leaf(CTensor<double>::zeros(Shape4{1, 2, 7, 7}))};
}

}  // namespace

TEST_CASE("zero weights give the forced identity gates") {
    Graph<double> g;
    Rng rng(211);
    CTensor<double> u = rand_ctensor(rng, {2, 4, 5, 6});
    CVar<double> uv = g.leaf(u);
    auto refs = zero_refs(g, 4, 2);

    // each branch is sigmoid(0) = 0.5+0.5j, summed -> exactly 1+1j
    CTensor<double> gc = g.value(attn::channel_attention(uv, refs.w1, refs.w2));
    CHECK(gc.shape() == Shape4{2, 4, 1, 1});
    for (double v : gc.re.data) CHECK(v == doctest::Approx(1.0));
    for (double v : gc.im.data) CHECK(v == doctest::Approx(1.0));

    CTensor<double> gs = g.value(attn::spatial_attention(uv, refs.f));
    CHECK(gs.shape() == Shape4{2, 1, 5, 6});
    for (double v : gs.re.data) CHECK(v == doctest::Approx(0.5));
    for (double v : gs.im.data) CHECK(v == doctest::Approx(0.5));

    // composition: channel gate is identity, spatial gate halves both planes
    CTensor<double> out = g.value(attn::ccbam(uv, refs));
    CHECK(out.shape() == u.shape());
    for (size_t i = 0; i < out.re.data.size(); ++i) {
        CHECK(out.re.data[i] == doctest::Approx(0.5 * u.re.data[i]));
        CHECK(out.im.data[i] == doctest::Approx(0.5 * u.im.data[i]));
    }
}

TEST_CASE("channel attention matches the scalar oracle") {
    Rng rng(223);
    for (int i = 0; i < 20; ++i) {
        long c = 2 * (1 + static_cast<long>(uniform01(rng) * 3));
        long r = (i % 2 == 0) ? 1 : 2;
        CTensor<double> u = rand_ctensor(rng, {2, c, 3, 4}, -2.0, 2.0);
        CTensor<double> w1 = rand_ctensor(rng, {c / r, c, 1, 1});
        CTensor<double> w2 = rand_ctensor(rng, {c, c / r, 1, 1});
        Graph<double> g;
        CTensor<double> gate =
            g.value(attn::channel_attention(g.leaf(u), g.leaf(w1), g.leaf(w2)));
        require_close(gate, oracles::channel_attention_oracle(u, w1, w2));
    }
}

TEST_CASE("spatial attention matches the loop oracle") {
    Rng rng(227);
    for (int i = 0; i < 20; ++i) {
        long c = 1 + static_cast<long>(uniform01(rng) * 4);
        CTensor<double> u = rand_ctensor(rng, {2, c, 5, 6}, -2.0, 2.0);
        CTensor<double> f = rand_ctensor(rng, {1, 2, 7, 7});
        Graph<double> g;
        CTensor<double> gate = g.value(attn::spatial_attention(g.leaf(u), g.leaf(f)));
        require_close(gate, oracles::spatial_attention_oracle(u, f));
    }
}

TEST_CASE("spatial attention with one channel pools to two identical maps") {
    Rng rng(229);
    CTensor<double> u = rand_ctensor(rng, {1, 1, 8, 9});
    CTensor<double> f = rand_ctensor(rng, {1, 2, 7, 7});
    Graph<double> g;
    CTensor<double> gate = g.value(attn::spatial_attention(g.leaf(u), g.leaf(f)));

    // oracle with the plane duplicated by hand
    CTensor<double> dup = CTensor<double>::zeros(Shape4{1, 2, 8, 9});
    for (long h = 0; h < 8; ++h)
        for (long w = 0; w < 9; ++w) {
            dup.re.at(0, 0, h, w) = dup.re.at(0, 1, h, w) = u.re.at(0, 0, h, w);
            dup.im.at(0, 0, h, w) = dup.im.at(0, 1, h, w) = u.im.at(0, 0, h, w);
        }
    CTensor<double> conv =
        oracles::complex_corr2d_loops(dup, f, ops::ConvGeom{1, 1, 3, 3, 0, 0});
    for (auto& v : conv.re.data) v = 1.0 / (1.0 + std::exp(-v));
    for (auto& v : conv.im.data) v = 1.0 / (1.0 + std::exp(-v));
    require_close(gate, conv);
}

TEST_CASE("gate bounds hold over random inputs") {
    Rng rng(233);
    for (int i = 0; i < 100; ++i) {
        CTensor<double> u = rand_ctensor(rng, {1, 4, 3, 5}, -10.0, 10.0);
        CTensor<double> w1 = rand_ctensor(rng, {2, 4, 1, 1}, -3.0, 3.0);
        CTensor<double> w2 = rand_ctensor(rng, {4, 2, 1, 1}, -3.0, 3.0);
        CTensor<double> f = rand_ctensor(rng, {1, 2, 7, 7}, -3.0, 3.0);
        Graph<double> g;
        CVar<double> uv = g.leaf(u);
        CTensor<double> gc = g.value(attn::channel_attention(uv, g.leaf(w1), g.leaf(w2)));
        for (double v : gc.re.data) CHECK((v > 0.0 && v < 2.0));
        for (double v : gc.im.data) CHECK((v > 0.0 && v < 2.0));
        CTensor<double> gs = g.value(attn::spatial_attention(uv, g.leaf(f)));
        for (double v : gs.re.data) CHECK((v > 0.0 && v < 1.0));
        for (double v : gs.im.data) CHECK((v > 0.0 && v < 1.0));
    }
}

TEST_CASE("full block matches the composed oracles") {
    Rng rng(239);
    CTensor<double> u = rand_ctensor(rng, {1, 2, 4, 4});
    CTensor<double> w1 = rand_ctensor(rng, {1, 2, 1, 1});
    CTensor<double> w2 = rand_ctensor(rng, {2, 1, 1, 1});
    CTensor<double> f = rand_ctensor(rng, {1, 2, 7, 7});

    Graph<double> g;
    attn::AttentionRefs<double> refs{g.leaf(w1), g.leaf(w2), g.leaf(f)};
    CTensor<double> out = g.value(attn::ccbam(g.leaf(u), refs));

    CTensor<double> gc = oracles::channel_attention_oracle(u, w1, w2);
    CTensor<double> u1 = CTensor<double>::zeros(u.shape());
    for (long b = 0; b < u.shape().b; ++b)
        for (long c = 0; c < u.shape().c; ++c)
            for (long h = 0; h < u.shape().h; ++h)
                for (long w = 0; w < u.shape().w; ++w) {
                    u1.re.at(b, c, h, w) = u.re.at(b, c, h, w) * gc.re.at(b, c, 0, 0);
                    u1.im.at(b, c, h, w) = u.im.at(b, c, h, w) * gc.im.at(b, c, 0, 0);
                }
    CTensor<double> gs = oracles::spatial_attention_oracle(u1, f);
    CTensor<double> expect = CTensor<double>::zeros(u.shape());
    for (long b = 0; b < u.shape().b; ++b)
        for (long c = 0; c < u.shape().c; ++c)
            for (long h = 0; h < u.shape().h; ++h)
                for (long w = 0; w < u.shape().w; ++w) {
                    expect.re.at(b, c, h, w) = u1.re.at(b, c, h, w) * gs.re.at(b, 0, h, w);
                    expect.im.at(b, c, h, w) = u1.im.at(b, c, h, w) * gs.im.at(b, 0, h, w);
                }
    require_close(out, expect);
}

TEST_CASE("spatial gate shifts with the input away from boundaries") {
    Rng rng(241);
    long hh = 6, ww = 20, shift = 3;
    CTensor<double> u = rand_ctensor(rng, {1, 3, hh, ww});
    CTensor<double> shifted = CTensor<double>::zeros(u.shape());
    for (long c = 0; c < 3; ++c)
        for (long h = 0; h < hh; ++h)
            for (long w = 0; w + shift < ww; ++w) {
                shifted.re.at(0, c, h, w + shift) = u.re.at(0, c, h, w);
                shifted.im.at(0, c, h, w + shift) = u.im.at(0, c, h, w);
            }
    CTensor<double> f = rand_ctensor(rng, {1, 2, 7, 7});

    Graph<double> g;
    CVar<double> fv = g.leaf(f);
    CTensor<double> g0 = g.value(attn::spatial_attention(g.leaf(u), fv));
    CTensor<double> g1 = g.value(attn::spatial_attention(g.leaf(shifted), fv));
    // interior columns (kernel half-width 3 away from either end of the overlap)
    for (long h = 0; h < hh; ++h)
        for (long w = 3; w + shift + 3 < ww; ++w) {
            CHECK(g1.re.at(0, 0, h, w + shift) ==
                  doctest::Approx(g0.re.at(0, 0, h, w)).epsilon(1e-12));
            CHECK(g1.im.at(0, 0, h, w + shift) ==
                  doctest::Approx(g0.im.at(0, 0, h, w)).epsilon(1e-12));
        }
}

TEST_CASE("attention parameters register with the documented count") {
    ParamStore<double> store;
    Rng rng(251);
    attn::add_attention_params(store, "att0", 8, 4, rng);
    CHECK(store.size() == 6);  // three complex tensors, two planes each
    CHECK(store.total_scalars() == attn::attention_param_count(8, 4));
    CHECK(attn::attention_param_count(8, 4) == 2 * (2 * 64 / 4) + 2 * (2 * 49));

    Graph<double> g;
    GraphBinding<double> bind(g, store);
    auto refs = attn::bind_attention(bind, "att0");
    CHECK(g.value(refs.w1.re).shape == Shape4{2, 8, 1, 1});
    CHECK(g.value(refs.w2.re).shape == Shape4{8, 2, 1, 1});
    CHECK(g.value(refs.f.re).shape == Shape4{1, 2, 7, 7});

    CHECK_THROWS_AS(attn::add_attention_params(store, "bad", 6, 4, rng),
                    std::invalid_argument);
}

TEST_CASE("gradients flow through both gates") {
    Rng rng(257);
    auto st = oracles::grad_check(
        {oracles::rand_tensor(rng, {1, 2, 3, 4}), oracles::rand_tensor(rng, {1, 2, 3, 4}),
         oracles::rand_tensor(rng, {1, 2, 1, 1}), oracles::rand_tensor(rng, {1, 2, 1, 1}),
         oracles::rand_tensor(rng, {2, 1, 1, 1}), oracles::rand_tensor(rng, {2, 1, 1, 1}),
         oracles::rand_tensor(rng, {1, 2, 7, 7}), oracles::rand_tensor(rng, {1, 2, 7, 7})},
        [](Graph<double>&, const std::vector<Var<double>>& v) {
            attn::AttentionRefs<double> refs{CVar<double>{v[2], v[3]},
                                             CVar<double>{v[4], v[5]},
                                             CVar<double>{v[6], v[7]}};
            CVar<double> out = attn::ccbam(CVar<double>{v[0], v[1]}, refs);
            return ag::sum_all(out.re) + ag::sum_all(out.im);
        });
    CHECK(st.max_rel_err < 1e-6);
}
