#ifndef CCBAM_OPTIM_HPP
#define CCBAM_OPTIM_HPP

#include <vector>

#include "ccbam/params.hpp"

namespace ccbam {

template <typename T>
struct AdamConfig {
    T lr = T(1e-3);
    T beta1 = T(0.9);
    T beta2 = T(0.999);
    T eps = T(1e-8);
};

// One Adam update with bias correction over every trainable entry, in
// insertion order. Increments the store's step counter.
template <typename T>
void adam_step(ParamStore<T>& store, const AdamConfig<T>& cfg) {
    store.step += 1;
    T b1t = std::pow(cfg.beta1, static_cast<T>(store.step));
    T b2t = std::pow(cfg.beta2, static_cast<T>(store.step));
    for (auto& e : store.entries()) {
        if (!e.trainable) continue;
        for (size_t i = 0; i < e.value.data.size(); ++i) {
            T g = e.grad.data[i];
            e.m.data[i] = cfg.beta1 * e.m.data[i] + (T(1) - cfg.beta1) * g;
            e.v.data[i] = cfg.beta2 * e.v.data[i] + (T(1) - cfg.beta2) * g * g;
            T m_hat = e.m.data[i] / (T(1) - b1t);
            T v_hat = e.v.data[i] / (T(1) - b2t);
            e.value.data[i] -= cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.eps);
        }
    }
}

// Halve the rate when the latest validation loss exceeds the best seen before
// it; floor at 1e-6.
template <typename T>
T lr_schedule(T current_lr, const std::vector<T>& validation_history) {
    if (validation_history.empty())
        shape_error("lr_schedule", "empty validation history");
    if (validation_history.size() < 2) return current_lr;
    T best = validation_history[0];
    for (size_t i = 0; i + 1 < validation_history.size(); ++i)
        best = std::min(best, validation_history[i]);
    T lr = current_lr;
    if (validation_history.back() > best) lr = current_lr / T(2);
    return std::max(lr, T(1e-6));
}

}  // namespace ccbam

#endif
