#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "kedial/autograd.hpp"

namespace kedial {

// A named trainable leaf. The node owns both the value and the persistent
// gradient buffer that backward() accumulates into.
struct Parameter {
    std::string name;
    NodeRef node;

    Tensor& value() { return node->value; }
    const Tensor& value() const { return node->value; }
    Tensor& grad() { return node->ensure_grad(); }
};

struct AdamWConfig {
    double lr = 1e-5;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 0.01;
};

struct AdamWState {
    int64_t step = 0;
    std::vector<Tensor> m;
    std::vector<Tensor> v;
};

AdamWState make_adamw_state(const std::vector<Parameter>& params);

// One decoupled-weight-decay Adam update. Decay is applied to the parameter
// directly, never through the moment estimates. Throws on unpopulated
// gradients or invalid hyperparameters.
void adamw_step(std::vector<Parameter>& params, AdamWState& state, const AdamWConfig& config);

void zero_grads(std::vector<Parameter>& params);

double grad_global_norm(const std::vector<Parameter>& params);

// Rescales all gradients so their global L2 norm is at most max_norm.
void clip_grad_norm(std::vector<Parameter>& params, double max_norm);

// Central-difference check of analytic gradients. `forward` must rebuild the
// graph from current parameter values and return the scalar loss node.
// Samples n_samples coordinates (seeded, without replacement when possible)
// and returns max |analytic - numeric| / max(|analytic|, |numeric|, 1e-12).
// Requires eps > 0.
double grad_check(const std::function<NodeRef()>& forward, std::vector<Parameter>& params,
                  double eps, int n_samples = 100, uint64_t seed = 0);

}  // namespace kedial
