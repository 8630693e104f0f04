#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "kedial/tensor.hpp"

namespace kedial {

// One node of a reverse-mode differentiation graph. Graphs are built by the
// op functions below, rooted at leaf nodes (parameters or constants), and
// torn down when the last NodeRef goes out of scope.
//
// Gradient semantics: backward() zeroes the grads of every interior node it
// reaches, but *accumulates* into leaf grads. Callers zero leaf grads
// explicitly between optimizer steps (see optim.hpp), which makes
// batch-splitting produce identical sums.
struct Node {
    Tensor value;
    Tensor grad;
    bool requires_grad = false;
    bool is_leaf = false;
    const char* op = "leaf";
    std::vector<std::shared_ptr<Node>> inputs;
    // Reads this->grad and accumulates into inputs' grads. Captures raw
    // pointers only; the inputs vector keeps them alive.
    std::function<void()> backprop;

    Tensor& ensure_grad() {
        if (grad.data.empty()) grad = Tensor(value.shape);
        return grad;
    }
};

using NodeRef = std::shared_ptr<Node>;

NodeRef make_leaf(Tensor value, bool requires_grad);
NodeRef make_constant(Tensor value);

// ---- graph ops ------------------------------------------------------------
// All ops validate shapes and, in checked mode, scan outputs for NaN/Inf.

// [M,K] x [K,N] -> [M,N]
NodeRef matmul(const NodeRef& a, const NodeRef& b);
// [M,K] x [N,K]^T -> [M,N]
NodeRef matmul_nt(const NodeRef& a, const NodeRef& b);
// elementwise, same shape
NodeRef add(const NodeRef& a, const NodeRef& b);
// [M,N] + row vector [N]
NodeRef add_rowvec(const NodeRef& a, const NodeRef& bias);
NodeRef scale(const NodeRef& a, double s);
// exact GELU: 0.5 x (1 + erf(x / sqrt(2)))
NodeRef gelu(const NodeRef& a);
// row-wise layer norm with learned gain/bias, eps inside the sqrt
NodeRef layer_norm(const NodeRef& a, const NodeRef& gamma, const NodeRef& beta,
                   double eps = 1e-5);
// gather rows of table [V,D] by token id -> [T,D]
NodeRef embedding(const NodeRef& table, const std::vector<int>& ids);
// row-wise softmax over [M,N]
NodeRef softmax_rows(const NodeRef& a);
// row-wise softmax where row i only sees columns j <= i (square score matrix)
NodeRef causal_softmax_rows(const NodeRef& a);
// columns [c0, c1) of a [M,N] matrix
NodeRef slice_cols(const NodeRef& a, int c0, int c1);
// gather rows of a [M,N] node by index (duplicates allowed)
NodeRef gather_rows(const NodeRef& a, const std::vector<int>& rows);
NodeRef concat_cols(const std::vector<NodeRef>& parts);
// inverted dropout; identity when p == 0
NodeRef dropout(const NodeRef& a, double p, Rng& rng);
// sum over t of -log softmax(logits[t])[targets[t]]; scalar output
NodeRef seq_cross_entropy(const NodeRef& logits, const std::vector<int>& targets);
// sum of scalar nodes
NodeRef add_scalars(const std::vector<NodeRef>& terms);

// Runs reverse-mode accumulation from a scalar loss node. Deterministic:
// the traversal order is a pure function of graph construction order.
// Throws NumericError if loss is not scalar.
void backward(const NodeRef& loss);

// ---- plain value-path helpers ----------------------------------------------

// Numerically stable softmax of a rank-1 tensor (max subtraction).
// Errors on empty or non-finite input.
Tensor softmax_vec(const Tensor& logits);

// -log softmax(logits)[target]; errors on out-of-range target.
double cross_entropy_value(const Tensor& logits, int target);

}  // namespace kedial
