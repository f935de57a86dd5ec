#include "vent/ad/optim.hpp"

#include <cmath>
#include <stdexcept>

namespace vent::ad {

double cyclical_lr(long step, double base_lr, double max_lr, long cycle_len) {
    if (cycle_len <= 0) throw std::invalid_argument("cycle_len must be positive");
    const double frac = static_cast<double>(step % cycle_len) / static_cast<double>(cycle_len);
    const double tri = 1.0 - std::abs(2.0 * frac - 1.0);
    return base_lr + (max_lr - base_lr) * tri;
}

void AdamW::step(std::vector<Param>& params, double lr) {
    if (state_.empty()) {
        state_.resize(params.size());
        for (size_t p = 0; p < params.size(); ++p) {
            state_[p].m.assign(params[p].tensor.size(), 0.0);
            state_[p].v.assign(params[p].tensor.size(), 0.0);
        }
    }
    if (state_.size() != params.size()) {
        throw std::invalid_argument("optimizer state does not match the parameter list");
    }

    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));

    for (size_t p = 0; p < params.size(); ++p) {
        auto& x = params[p].tensor.mutable_value();
        const auto& g = params[p].tensor.grad();
        auto& st = state_[p];
        if (st.m.size() != x.size()) {
            throw std::invalid_argument("state shape mismatch for parameter " + params[p].name);
        }
        const bool has_grad = g.size() == x.size();
        for (size_t n = 0; n < x.size(); ++n) {
            const double gn = has_grad ? g[n] : 0.0;
            if (!std::isfinite(gn)) {
                throw std::runtime_error("NaN gradient in parameter " + params[p].name);
            }
            st.m[n] = beta1_ * st.m[n] + (1.0 - beta1_) * gn;
            st.v[n] = beta2_ * st.v[n] + (1.0 - beta2_) * gn * gn;
            const double mhat = st.m[n] / bc1;
            const double vhat = st.v[n] / bc2;
            x[n] -= lr * (mhat / (std::sqrt(vhat) + eps_) + weight_decay_ * x[n]);
        }
    }
}

}  // namespace vent::ad
