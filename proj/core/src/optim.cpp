#include "kedial/optim.hpp"

#include <algorithm>
#include <cmath>

namespace kedial {

AdamWState make_adamw_state(const std::vector<Parameter>& params) {
    AdamWState state;
    state.m.reserve(params.size());
    state.v.reserve(params.size());
    for (const auto& p : params) {
        state.m.emplace_back(p.value().shape);
        state.v.emplace_back(p.value().shape);
    }
    return state;
}

void adamw_step(std::vector<Parameter>& params, AdamWState& state, const AdamWConfig& config) {
    if (config.lr < 0.0 || config.eps <= 0.0 || config.weight_decay < 0.0) {
        throw NumericError("adamw: lr/eps/weight_decay out of range");
    }
    if (config.beta1 <= 0.0 || config.beta1 >= 1.0 || config.beta2 <= 0.0 || config.beta2 >= 1.0) {
        throw NumericError("adamw: betas must be in (0, 1)");
    }
    if (state.m.size() != params.size()) {
        throw NumericError("adamw: state does not match parameter list");
    }
    state.step += 1;
    const double bc1 = 1.0 - std::pow(config.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(config.beta2, static_cast<double>(state.step));
    for (size_t pi = 0; pi < params.size(); ++pi) {
        Parameter& p = params[pi];
        if (p.node->grad.data.empty()) {
            throw NumericError("adamw: gradient for '" + p.name + "' was never populated");
        }
        Tensor& m = state.m[pi];
        Tensor& v = state.v[pi];
        Tensor& val = p.value();
        const Tensor& g = p.node->grad;
        for (size_t i = 0; i < val.data.size(); ++i) {
            const double gi = g.data[i];
            m.data[i] = config.beta1 * m.data[i] + (1.0 - config.beta1) * gi;
            v.data[i] = config.beta2 * v.data[i] + (1.0 - config.beta2) * gi * gi;
            const double mhat = m.data[i] / bc1;
            const double vhat = v.data[i] / bc2;
            val.data[i] -= config.lr * (mhat / (std::sqrt(vhat) + config.eps) +
                                        config.weight_decay * val.data[i]);
        }
        check_finite(val, "adamw_step");
    }
}

void zero_grads(std::vector<Parameter>& params) {
    for (auto& p : params) p.grad().fill(0.0);
}

double grad_global_norm(const std::vector<Parameter>& params) {
    double sq = 0.0;
    for (const auto& p : params) {
        for (double g : p.node->grad.data) sq += g * g;
    }
    return std::sqrt(sq);
}

void clip_grad_norm(std::vector<Parameter>& params, double max_norm) {
    const double norm = grad_global_norm(params);
    if (norm <= max_norm || norm == 0.0) return;
    const double s = max_norm / norm;
    for (auto& p : params) {
        for (double& g : p.node->grad.data) g *= s;
    }
}

double grad_check(const std::function<NodeRef()>& forward, std::vector<Parameter>& params,
                  double eps, int n_samples, uint64_t seed) {
    if (eps <= 0.0) throw NumericError("grad_check: eps must be positive");
    if (params.empty()) throw NumericError("grad_check: no parameters");

    zero_grads(params);
    NodeRef loss = forward();
    backward(loss);

    // Snapshot analytic grads; FD evaluation reuses the live parameters.
    std::vector<Tensor> analytic;
    analytic.reserve(params.size());
    for (auto& p : params) analytic.push_back(p.node->grad);

    int64_t total = 0;
    for (const auto& p : params) total += p.value().numel();
    const int64_t wanted = std::min<int64_t>(n_samples, total);

    Rng rng(seed);
    std::vector<std::pair<size_t, size_t>> coords;
    coords.reserve(static_cast<size_t>(wanted));
    if (total <= 4 * wanted) {
        // Small space: shuffle all coordinates and take a prefix.
        std::vector<std::pair<size_t, size_t>> all;
        all.reserve(static_cast<size_t>(total));
        for (size_t pi = 0; pi < params.size(); ++pi) {
            for (size_t i = 0; i < params[pi].value().data.size(); ++i) all.emplace_back(pi, i);
        }
        std::shuffle(all.begin(), all.end(), rng);
        coords.assign(all.begin(), all.begin() + static_cast<size_t>(wanted));
    } else {
        std::uniform_int_distribution<int64_t> dist(0, total - 1);
        std::vector<bool> taken(static_cast<size_t>(total), false);
        while (static_cast<int64_t>(coords.size()) < wanted) {
            int64_t flat = dist(rng);
            if (taken[static_cast<size_t>(flat)]) continue;
            taken[static_cast<size_t>(flat)] = true;
            size_t pi = 0;
            while (flat >= params[pi].value().numel()) {
                flat -= params[pi].value().numel();
                ++pi;
            }
            coords.emplace_back(pi, static_cast<size_t>(flat));
        }
    }

    double max_rel = 0.0;
    for (const auto& [pi, i] : coords) {
        double& x = params[pi].value().data[i];
        const double saved = x;
        x = saved + eps;
        const double up = forward()->value.data[0];
        x = saved - eps;
        const double down = forward()->value.data[0];
        x = saved;
        const double numeric = (up - down) / (2.0 * eps);
        const double a = analytic[pi].data[i];
        const double denom = std::max({std::fabs(a), std::fabs(numeric), 1e-12});
        max_rel = std::max(max_rel, std::fabs(a - numeric) / denom);
    }
    return max_rel;
}

}  // namespace kedial
