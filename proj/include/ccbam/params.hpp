#ifndef CCBAM_PARAMS_HPP
#define CCBAM_PARAMS_HPP

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "ccbam/autograd.hpp"
#include "ccbam/rng.hpp"

namespace ccbam {

// Named trainable tensors with gradient and Adam-moment storage. Complex
// parameters are registered as two real planes, "<base>.re" / "<base>.im",
// which matches the per-plane gradient and optimizer semantics exactly.
// Iteration order is insertion order and drives checkpoint layout and the
// optimizer sweep, so runs are deterministic.
template <typename T>
class ParamStore {
public:
    struct Entry {
        std::string name;
        Tensor<T> value;
        Tensor<T> grad;
        Tensor<T> m, v;
        bool trainable = true;
    };

    long add(const std::string& name, Tensor<T> value, bool trainable = true) {
        if (index_.count(name))
            shape_error("ParamStore::add", "duplicate parameter name " + name);
        Entry e;
        e.name = name;
        e.grad = Tensor<T>(value.shape);
        e.m = Tensor<T>(value.shape);
        e.v = Tensor<T>(value.shape);
        e.value = std::move(value);
        e.trainable = trainable;
        index_[name] = entries_.size();
        entries_.push_back(std::move(e));
        return static_cast<long>(entries_.size()) - 1;
    }

    void add_complex(const std::string& base, CTensor<T> value, bool trainable = true) {
        add(base + ".re", std::move(value.re), trainable);
        add(base + ".im", std::move(value.im), trainable);
    }

    bool has(const std::string& name) const { return index_.count(name) != 0; }

    Entry& at(const std::string& name) {
        auto it = index_.find(name);
        if (it == index_.end())
            shape_error("ParamStore::at", "unknown parameter " + name);
        return entries_[it->second];
    }
    const Entry& at(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end())
            shape_error("ParamStore::at", "unknown parameter " + name);
        return entries_[it->second];
    }

    std::vector<Entry>& entries() { return entries_; }
    const std::vector<Entry>& entries() const { return entries_; }
    size_t size() const { return entries_.size(); }

    long total_scalars() const {
        long n = 0;
        for (const Entry& e : entries_) n += e.value.count();
        return n;
    }

    void zero_grads() {
        for (Entry& e : entries_)
            std::fill(e.grad.data.begin(), e.grad.data.end(), T(0));
    }

    std::uint64_t step = 0;

private:
    std::vector<Entry> entries_;
    std::unordered_map<std::string, size_t> index_;
};

// Per-step bridge between a store and one graph: binds parameters as leaves,
// then harvests their gradients back into the store after backward().
template <typename T>
class GraphBinding {
public:
    GraphBinding(Graph<T>& g, ParamStore<T>& store) : g_(&g), store_(&store) {}

    Var<T> operator()(const std::string& name) {
        auto& e = store_->at(name);
        Var<T> v = g_->leaf(e.value, e.trainable);
        bound_.push_back({name, v});
        return v;
    }

    CVar<T> complex(const std::string& base) {
        return CVar<T>{(*this)(base + ".re"), (*this)(base + ".im")};
    }

    // Accumulates d(loss)/d(param) into each bound entry's grad.
    void harvest() {
        for (auto& [name, var] : bound_) {
            auto& e = store_->at(name);
            if (!e.trainable) continue;
            const Tensor<T>& gv = g_->grad(var);
            for (size_t i = 0; i < gv.data.size(); ++i) e.grad.data[i] += gv.data[i];
        }
    }

private:
    Graph<T>* g_;
    ParamStore<T>* store_;
    std::vector<std::pair<std::string, Var<T>>> bound_;
};

// Both planes drawn uniform in +-sqrt(6/(fan_in+fan_out))/sqrt(2), fans
// counted in complex units, so the complex variance matches Glorot.
template <typename T>
CTensor<T> complex_glorot_uniform(Rng& rng, Shape4 shape, long fan_in, long fan_out) {
    double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out)) /
                   std::sqrt(2.0);
    CTensor<T> out = CTensor<T>::zeros(shape);
    for (auto& v : out.re.data) v = static_cast<T>(uniform(rng, -limit, limit));
    for (auto& v : out.im.data) v = static_cast<T>(uniform(rng, -limit, limit));
    return out;
}

}  // namespace ccbam

#endif
