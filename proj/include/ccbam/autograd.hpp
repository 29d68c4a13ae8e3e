#ifndef CCBAM_AUTOGRAD_HPP
#define CCBAM_AUTOGRAD_HPP

#include <functional>
#include <vector>

#include "ccbam/ops.hpp"
#include "ccbam/tensor.hpp"

// Reverse-mode differentiation over the real primitive kernels. Nodes are
// recorded in evaluation order, so the tape is topologically sorted by
// construction and backward() is a single reverse sweep. Complex tensors are
// differentiated as independent real/imag planes; a complex feature map is a
// CVar holding two real nodes.

namespace ccbam {

template <typename T> class Graph;

template <typename T>
struct Var {
    Graph<T>* g = nullptr;
    int id = -1;
    bool valid() const { return g != nullptr && id >= 0; }
};

template <typename T>
struct CVar {
    Var<T> re, im;
};

template <typename T>
class Graph {
public:
    struct Node {
        Tensor<T> value;
        Tensor<T> grad;
        bool has_grad = false;
        bool needs_grad = false;
        std::function<void(Graph&)> backward;
    };

    Var<T> leaf(Tensor<T> v, bool needs_grad = false) {
        Node n;
        n.value = std::move(v);
        n.needs_grad = needs_grad;
        nodes_.push_back(std::move(n));
        return Var<T>{this, static_cast<int>(nodes_.size()) - 1};
    }

    CVar<T> leaf(const CTensor<T>& v, bool needs_grad = false) {
        return CVar<T>{leaf(v.re, needs_grad), leaf(v.im, needs_grad)};
    }

    // Generic op factory; `bw` reads the output grad and accumulates into the
    // inputs via accum(). Ops whose inputs carry no gradient record nothing.
    Var<T> make_op(Tensor<T> value, std::vector<Var<T>> inputs,
                   std::function<void(Graph&)> bw) {
        Node n;
        n.value = std::move(value);
        for (const Var<T>& v : inputs)
            if (v.valid() && node(v.id).needs_grad) n.needs_grad = true;
        if (n.needs_grad) n.backward = std::move(bw);
        nodes_.push_back(std::move(n));
        return Var<T>{this, static_cast<int>(nodes_.size()) - 1};
    }

    Node& node(int id) { return nodes_[static_cast<size_t>(id)]; }
    const Node& node(int id) const { return nodes_[static_cast<size_t>(id)]; }

    const Tensor<T>& value(Var<T> v) const { return node(v.id).value; }
    CTensor<T> value(CVar<T> v) const { return CTensor<T>(value(v.re), value(v.im)); }
    T scalar(Var<T> v) const { return node(v.id).value.data[0]; }

    // Gradient of a node; zeros if backward never reached it.
    const Tensor<T>& grad(Var<T> v) {
        auto& n = node(v.id);
        if (!n.has_grad) {
            n.grad = Tensor<T>(n.value.shape);
            n.has_grad = true;
        }
        return n.grad;
    }

    void accum(int id, const Tensor<T>& g) {
        Node& n = node(id);
        if (!n.needs_grad) return;
        if (!n.has_grad) {
            n.grad = g;
            n.has_grad = true;
            return;
        }
        for (size_t i = 0; i < g.data.size(); ++i) n.grad.data[i] += g.data[i];
    }

    void backward(Var<T> loss) {
        Node& ln = node(loss.id);
        if (ln.value.count() != 1)
            shape_error("backward", "loss must be scalar, got " + ln.value.shape.str());
        if (!ln.has_grad) {
            ln.grad = Tensor<T>(ln.value.shape);
            ln.has_grad = true;
        }
        ln.grad.data[0] = T(1);
        for (int id = loss.id; id >= 0; --id) {
            Node& n = nodes_[static_cast<size_t>(id)];
            if (n.has_grad && n.backward) n.backward(*this);
        }
    }

    size_t size() const { return nodes_.size(); }

private:
    std::vector<Node> nodes_;
};

namespace ag {

// Convolution / dense.
template <typename T> Var<T> corr2d(Var<T> x, Var<T> k, ops::ConvGeom g);
template <typename T> Var<T> deconv2d(Var<T> x, Var<T> k, ops::ConvGeom g);
template <typename T> Var<T> matmul(Var<T> x, Var<T> w);

// Elementwise.
template <typename T> Var<T> relu(Var<T> x);
template <typename T> Var<T> leaky_relu(Var<T> x, T slope);
template <typename T> Var<T> sigmoid(Var<T> x);
template <typename T> Var<T> tanh_v(Var<T> x);
template <typename T> Var<T> log_v(Var<T> x);
template <typename T> Var<T> sqrt_v(Var<T> x);
template <typename T> Var<T> clamp_min_v(Var<T> x, T floor);
template <typename T> Var<T> scale_v(Var<T> x, T c);
template <typename T> Var<T> add_const_v(Var<T> x, T c);
template <typename T> Var<T> add(Var<T> a, Var<T> b);
template <typename T> Var<T> sub(Var<T> a, Var<T> b);
template <typename T> Var<T> mul(Var<T> a, Var<T> b);
template <typename T> Var<T> div_v(Var<T> a, Var<T> b);

// Pooling.
template <typename T> Var<T> global_avg_pool(Var<T> x);
template <typename T> Var<T> global_max_pool(Var<T> x);
template <typename T> Var<T> channel_avg_pool(Var<T> x);
template <typename T> Var<T> channel_max_pool(Var<T> x);

// Shape plumbing.
template <typename T> Var<T> concat_channels(Var<T> a, Var<T> b);
template <typename T> Var<T> slice_channels(Var<T> x, long c0, long c1);
template <typename T> Var<T> pad2d(Var<T> x, long h0, long h1, long w0, long w1);
template <typename T> Var<T> crop2d(Var<T> x, long h0, long h1, long w0, long w1);
template <typename T> Var<T> reshape(Var<T> x, Shape4 s);
template <typename T> Var<T> slice_w(Var<T> x, long w0, long w1);
template <typename T> Var<T> concat_w(const std::vector<Var<T>>& parts);

// Reductions (all return (…,1,1,1) tensors; sum_all/mean_all return scalars).
template <typename T> Var<T> sum_all(Var<T> x);
template <typename T> Var<T> mean_all(Var<T> x);
template <typename T> Var<T> sum_per_batch(Var<T> x);
template <typename T> Var<T> mean_over_bhw(Var<T> x);

}  // namespace ag

template <typename T> Var<T> operator+(Var<T> a, Var<T> b) { return ag::add(a, b); }
template <typename T> Var<T> operator-(Var<T> a, Var<T> b) { return ag::sub(a, b); }
template <typename T> Var<T> operator*(Var<T> a, Var<T> b) { return ag::mul(a, b); }
template <typename T> Var<T> operator/(Var<T> a, Var<T> b) { return ag::div_v(a, b); }
template <typename T> Var<T> operator-(Var<T> a) { return ag::scale_v(a, T(-1)); }

}  // namespace ccbam

#endif
