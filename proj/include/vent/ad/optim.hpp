#pragma once

#include "vent/ad/tensor.hpp"

#include <string>
#include <vector>

namespace vent::ad {

// Named trainable leaf.
struct Param {
    std::string name;
    Tensor tensor;
};

// Triangular wave between base_lr and max_lr with period cycle_len steps.
double cyclical_lr(long step, double base_lr, double max_lr, long cycle_len);

// Decoupled weight decay Adam with bias-corrected moments. State lives here,
// aligned with the parameter list order; a NaN gradient aborts with the
// offending parameter's name.
class AdamW {
public:
    explicit AdamW(double weight_decay = 0.0, double beta1 = 0.9, double beta2 = 0.999,
                   double eps = 1e-8)
        : weight_decay_(weight_decay), beta1_(beta1), beta2_(beta2), eps_(eps) {}

    void step(std::vector<Param>& params, double lr);

    long steps_taken() const { return t_; }

private:
    struct Moments {
        std::vector<double> m, v;
    };
    double weight_decay_, beta1_, beta2_, eps_;
    std::vector<Moments> state_;
    long t_ = 0;
};

}  // namespace vent::ad
