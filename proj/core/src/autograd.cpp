#include "kedial/autograd.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace kedial {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244;
constexpr double kInvSqrt2Pi = 0.3989422804014326779;

NodeRef new_node(const char* op, Tensor value, std::vector<NodeRef> inputs) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->value = std::move(value);
    n->inputs = std::move(inputs);
    for (const auto& in : n->inputs) {
        if (in->requires_grad) {
            n->requires_grad = true;
            break;
        }
    }
    check_finite(n->value, op);
    return n;
}

void require_rank2(const NodeRef& a, const char* op) {
    if (a->value.rank() != 2) {
        throw NumericError(std::string(op) + ": expected rank-2 input, got shape " +
                           shape_str(a->value.shape));
    }
}

// C += A * B for raw row-major blocks.
void gemm_acc(const double* a, const double* b, double* c, int m, int k, int n) {
    for (int i = 0; i < m; ++i) {
        const double* arow = a + static_cast<size_t>(i) * k;
        double* crow = c + static_cast<size_t>(i) * n;
        for (int kk = 0; kk < k; ++kk) {
            const double aik = arow[kk];
            if (aik == 0.0) continue;
            const double* brow = b + static_cast<size_t>(kk) * n;
            for (int j = 0; j < n; ++j) crow[j] += aik * brow[j];
        }
    }
}

// C += A * B^T, with B stored [N,K].
void gemm_nt_acc(const double* a, const double* b, double* c, int m, int k, int n) {
    for (int i = 0; i < m; ++i) {
        const double* arow = a + static_cast<size_t>(i) * k;
        double* crow = c + static_cast<size_t>(i) * n;
        for (int j = 0; j < n; ++j) {
            const double* brow = b + static_cast<size_t>(j) * k;
            double acc = 0.0;
            for (int kk = 0; kk < k; ++kk) acc += arow[kk] * brow[kk];
            crow[j] += acc;
        }
    }
}

// C += A^T * B, with A stored [M,K], result [K,N].
void gemm_tn_acc(const double* a, const double* b, double* c, int m, int k, int n) {
    for (int i = 0; i < m; ++i) {
        const double* arow = a + static_cast<size_t>(i) * k;
        const double* brow = b + static_cast<size_t>(i) * n;
        for (int kk = 0; kk < k; ++kk) {
            const double av = arow[kk];
            if (av == 0.0) continue;
            double* crow = c + static_cast<size_t>(kk) * n;
            for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
        }
    }
}

}  // namespace

NodeRef make_leaf(Tensor value, bool requires_grad) {
    auto n = std::make_shared<Node>();
    n->value = std::move(value);
    n->requires_grad = requires_grad;
    n->is_leaf = true;
    return n;
}

NodeRef make_constant(Tensor value) { return make_leaf(std::move(value), false); }

NodeRef matmul(const NodeRef& a, const NodeRef& b) {
    require_rank2(a, "matmul");
    require_rank2(b, "matmul");
    const int m = a->value.shape[0], k = a->value.shape[1];
    if (b->value.shape[0] != k) {
        throw NumericError("matmul: inner dimensions disagree: " + shape_str(a->value.shape) +
                           " x " + shape_str(b->value.shape));
    }
    const int n = b->value.shape[1];
    Tensor out({m, n});
    gemm_acc(a->value.data.data(), b->value.data.data(), out.data.data(), m, k, n);
    auto node = new_node("matmul", std::move(out), {a, b});
    Node* self = node.get();
    Node* pa = a.get();
    Node* pb = b.get();
    node->backprop = [self, pa, pb, m, k, n] {
        if (pa->requires_grad) {
            // dA += dC * B^T
            gemm_nt_acc(self->grad.data.data(), pb->value.data.data(),
                        pa->ensure_grad().data.data(), m, n, k);
        }
        if (pb->requires_grad) {
            // dB += A^T * dC
            gemm_tn_acc(pa->value.data.data(), self->grad.data.data(),
                        pb->ensure_grad().data.data(), m, k, n);
        }
    };
    return node;
}

NodeRef matmul_nt(const NodeRef& a, const NodeRef& b) {
    require_rank2(a, "matmul_nt");
    require_rank2(b, "matmul_nt");
    const int m = a->value.shape[0], k = a->value.shape[1];
    if (b->value.shape[1] != k) {
        throw NumericError("matmul_nt: inner dimensions disagree: " + shape_str(a->value.shape) +
                           " x " + shape_str(b->value.shape) + "^T");
    }
    const int n = b->value.shape[0];
    Tensor out({m, n});
    gemm_nt_acc(a->value.data.data(), b->value.data.data(), out.data.data(), m, k, n);
    auto node = new_node("matmul_nt", std::move(out), {a, b});
    Node* self = node.get();
    Node* pa = a.get();
    Node* pb = b.get();
    node->backprop = [self, pa, pb, m, k, n] {
        if (pa->requires_grad) {
            // dA += dC * B
            gemm_acc(self->grad.data.data(), pb->value.data.data(),
                     pa->ensure_grad().data.data(), m, n, k);
        }
        if (pb->requires_grad) {
            // dB += dC^T * A
            gemm_tn_acc(self->grad.data.data(), pa->value.data.data(),
                        pb->ensure_grad().data.data(), m, n, k);
        }
    };
    return node;
}

NodeRef add(const NodeRef& a, const NodeRef& b) {
    if (!a->value.same_shape(b->value)) {
        throw NumericError("add: shape mismatch: " + shape_str(a->value.shape) + " vs " +
                           shape_str(b->value.shape));
    }
    Tensor out = a->value;
    for (size_t i = 0; i < out.data.size(); ++i) out.data[i] += b->value.data[i];
    auto node = new_node("add", std::move(out), {a, b});
    Node* self = node.get();
    Node* pa = a.get();
    Node* pb = b.get();
    node->backprop = [self, pa, pb] {
        if (pa->requires_grad) {
            Tensor& g = pa->ensure_grad();
            for (size_t i = 0; i < g.data.size(); ++i) g.data[i] += self->grad.data[i];
        }
        if (pb->requires_grad) {
            Tensor& g = pb->ensure_grad();
            for (size_t i = 0; i < g.data.size(); ++i) g.data[i] += self->grad.data[i];
        }
    };
    return node;
}

NodeRef add_rowvec(const NodeRef& a, const NodeRef& bias) {
    require_rank2(a, "add_rowvec");
    if (bias->value.rank() != 1 || bias->value.shape[0] != a->value.shape[1]) {
        throw NumericError("add_rowvec: bias shape " + shape_str(bias->value.shape) +
                           " does not match matrix " + shape_str(a->value.shape));
    }
    const int m = a->value.shape[0], n = a->value.shape[1];
    Tensor out = a->value;
    for (int i = 0; i < m; ++i) {
        double* row = out.row_ptr(i);
        for (int j = 0; j < n; ++j) row[j] += bias->value.data[j];
    }
    auto node = new_node("add_rowvec", std::move(out), {a, bias});
    Node* self = node.get();
    Node* pa = a.get();
    Node* pbias = bias.get();
    node->backprop = [self, pa, pbias, m, n] {
        if (pa->requires_grad) {
            Tensor& g = pa->ensure_grad();
            for (size_t i = 0; i < g.data.size(); ++i) g.data[i] += self->grad.data[i];
        }
        if (pbias->requires_grad) {
            Tensor& g = pbias->ensure_grad();
            for (int i = 0; i < m; ++i) {
                const double* row = self->grad.row_ptr(i);
                for (int j = 0; j < n; ++j) g.data[j] += row[j];
            }
        }
    };
    return node;
}

NodeRef scale(const NodeRef& a, double s) {
    Tensor out = a->value;
    for (double& x : out.data) x *= s;
    auto node = new_node("scale", std::move(out), {a});
    Node* self = node.get();
    Node* pa = a.get();
    node->backprop = [self, pa, s] {
        if (!pa->requires_grad) return;
        Tensor& g = pa->ensure_grad();
        for (size_t i = 0; i < g.data.size(); ++i) g.data[i] += s * self->grad.data[i];
    };
    return node;
}

NodeRef gelu(const NodeRef& a) {
    Tensor out = a->value;
    for (double& x : out.data) x = 0.5 * x * (1.0 + std::erf(x * kInvSqrt2));
    auto node = new_node("gelu", std::move(out), {a});
    Node* self = node.get();
    Node* pa = a.get();
    node->backprop = [self, pa] {
        if (!pa->requires_grad) return;
        Tensor& g = pa->ensure_grad();
        for (size_t i = 0; i < g.data.size(); ++i) {
            const double x = pa->value.data[i];
            const double cdf = 0.5 * (1.0 + std::erf(x * kInvSqrt2));
            const double pdf = kInvSqrt2Pi * std::exp(-0.5 * x * x);
            g.data[i] += self->grad.data[i] * (cdf + x * pdf);
        }
    };
    return node;
}

NodeRef layer_norm(const NodeRef& a, const NodeRef& gamma, const NodeRef& beta, double eps) {
    require_rank2(a, "layer_norm");
    const int m = a->value.shape[0], n = a->value.shape[1];
    if (gamma->value.rank() != 1 || gamma->value.shape[0] != n ||
        beta->value.rank() != 1 || beta->value.shape[0] != n) {
        throw NumericError("layer_norm: gain/bias must be rank-1 of width " + std::to_string(n));
    }
    Tensor out({m, n});
    std::vector<double> mean(m), inv_std(m);
    for (int i = 0; i < m; ++i) {
        const double* row = a->value.row_ptr(i);
        double mu = 0.0;
        for (int j = 0; j < n; ++j) mu += row[j];
        mu /= n;
        double var = 0.0;
        for (int j = 0; j < n; ++j) {
            const double d = row[j] - mu;
            var += d * d;
        }
        var /= n;
        const double is = 1.0 / std::sqrt(var + eps);
        mean[i] = mu;
        inv_std[i] = is;
        double* orow = out.row_ptr(i);
        for (int j = 0; j < n; ++j) {
            orow[j] = (row[j] - mu) * is * gamma->value.data[j] + beta->value.data[j];
        }
    }
    auto node = new_node("layer_norm", std::move(out), {a, gamma, beta});
    Node* self = node.get();
    Node* pa = a.get();
    Node* pg = gamma.get();
    Node* pb = beta.get();
    node->backprop = [self, pa, pg, pb, m, n, mean = std::move(mean),
                      inv_std = std::move(inv_std)] {
        for (int i = 0; i < m; ++i) {
            const double* x = pa->value.row_ptr(i);
            const double* dy = self->grad.row_ptr(i);
            const double mu = mean[i];
            const double is = inv_std[i];
            if (pg->requires_grad || pb->requires_grad) {
                Tensor& gg = pg->ensure_grad();
                Tensor& gb = pb->ensure_grad();
                for (int j = 0; j < n; ++j) {
                    gg.data[j] += dy[j] * (x[j] - mu) * is;
                    gb.data[j] += dy[j];
                }
            }
            if (pa->requires_grad) {
                // dx = is * (dxhat - mean(dxhat) - xhat * mean(dxhat * xhat))
                double sum_dxh = 0.0, sum_dxh_xh = 0.0;
                for (int j = 0; j < n; ++j) {
                    const double xh = (x[j] - mu) * is;
                    const double dxh = dy[j] * pg->value.data[j];
                    sum_dxh += dxh;
                    sum_dxh_xh += dxh * xh;
                }
                Tensor& ga = pa->ensure_grad();
                double* dx = ga.row_ptr(i);
                for (int j = 0; j < n; ++j) {
                    const double xh = (x[j] - mu) * is;
                    const double dxh = dy[j] * pg->value.data[j];
                    dx[j] += is * (dxh - sum_dxh / n - xh * sum_dxh_xh / n);
                }
            }
        }
    };
    return node;
}

NodeRef embedding(const NodeRef& table, const std::vector<int>& ids) {
    require_rank2(table, "embedding");
    const int v = table->value.shape[0], d = table->value.shape[1];
    if (ids.empty()) throw NumericError("embedding: empty id sequence");
    for (int id : ids) {
        if (id < 0 || id >= v) {
            throw NumericError("embedding: token id " + std::to_string(id) +
                               " out of range [0, " + std::to_string(v) + ")");
        }
    }
    const int t = static_cast<int>(ids.size());
    Tensor out({t, d});
    for (int i = 0; i < t; ++i) {
        const double* src = table->value.row_ptr(ids[i]);
        std::copy(src, src + d, out.row_ptr(i));
    }
    auto node = new_node("embedding", std::move(out), {table});
    Node* self = node.get();
    Node* ptab = table.get();
    node->backprop = [self, ptab, ids, t, d] {
        if (!ptab->requires_grad) return;
        Tensor& g = ptab->ensure_grad();
        for (int i = 0; i < t; ++i) {
            const double* src = self->grad.row_ptr(i);
            double* dst = g.row_ptr(ids[i]);
            for (int j = 0; j < d; ++j) dst[j] += src[j];
        }
    };
    return node;
}

namespace {

void softmax_row(const double* in, double* out, int n) {
    double mx = in[0];
    for (int j = 1; j < n; ++j) mx = std::max(mx, in[j]);
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
        out[j] = std::exp(in[j] - mx);
        sum += out[j];
    }
    const double inv = 1.0 / sum;
    for (int j = 0; j < n; ++j) out[j] *= inv;
}

}  // namespace

NodeRef softmax_rows(const NodeRef& a) {
    require_rank2(a, "softmax_rows");
    const int m = a->value.shape[0], n = a->value.shape[1];
    Tensor out({m, n});
    for (int i = 0; i < m; ++i) softmax_row(a->value.row_ptr(i), out.row_ptr(i), n);
    auto node = new_node("softmax_rows", std::move(out), {a});
    Node* self = node.get();
    Node* pa = a.get();
    node->backprop = [self, pa, m, n] {
        if (!pa->requires_grad) return;
        Tensor& g = pa->ensure_grad();
        for (int i = 0; i < m; ++i) {
            const double* p = self->value.row_ptr(i);
            const double* dp = self->grad.row_ptr(i);
            double dot = 0.0;
            for (int j = 0; j < n; ++j) dot += dp[j] * p[j];
            double* da = g.row_ptr(i);
            for (int j = 0; j < n; ++j) da[j] += p[j] * (dp[j] - dot);
        }
    };
    return node;
}

NodeRef causal_softmax_rows(const NodeRef& a) {
    require_rank2(a, "causal_softmax_rows");
    const int m = a->value.shape[0], n = a->value.shape[1];
    if (m != n) {
        throw NumericError("causal_softmax_rows: score matrix must be square, got " +
                           shape_str(a->value.shape));
    }
    Tensor out({m, n});
    for (int i = 0; i < m; ++i) {
        softmax_row(a->value.row_ptr(i), out.row_ptr(i), i + 1);
        double* orow = out.row_ptr(i);
        for (int j = i + 1; j < n; ++j) orow[j] = 0.0;
    }
    auto node = new_node("causal_softmax_rows", std::move(out), {a});
    Node* self = node.get();
    Node* pa = a.get();
    node->backprop = [self, pa, m] {
        if (!pa->requires_grad) return;
        Tensor& g = pa->ensure_grad();
        for (int i = 0; i < m; ++i) {
            const int w = i + 1;
            const double* p = self->value.row_ptr(i);
            const double* dp = self->grad.row_ptr(i);
            double dot = 0.0;
            for (int j = 0; j < w; ++j) dot += dp[j] * p[j];
            double* da = g.row_ptr(i);
            for (int j = 0; j < w; ++j) da[j] += p[j] * (dp[j] - dot);
        }
    };
    return node;
}

NodeRef slice_cols(const NodeRef& a, int c0, int c1) {
    require_rank2(a, "slice_cols");
    const int m = a->value.shape[0], n = a->value.shape[1];
    if (c0 < 0 || c1 > n || c0 >= c1) {
        throw NumericError("slice_cols: bad column range [" + std::to_string(c0) + ", " +
                           std::to_string(c1) + ") for width " + std::to_string(n));
    }
    const int w = c1 - c0;
    Tensor out({m, w});
    for (int i = 0; i < m; ++i) {
        const double* src = a->value.row_ptr(i) + c0;
        std::copy(src, src + w, out.row_ptr(i));
    }
    auto node = new_node("slice_cols", std::move(out), {a});
    Node* self = node.get();
    Node* pa = a.get();
    node->backprop = [self, pa, m, w, c0] {
        if (!pa->requires_grad) return;
        Tensor& g = pa->ensure_grad();
        for (int i = 0; i < m; ++i) {
            const double* src = self->grad.row_ptr(i);
            double* dst = g.row_ptr(i) + c0;
            for (int j = 0; j < w; ++j) dst[j] += src[j];
        }
    };
    return node;
}

NodeRef gather_rows(const NodeRef& a, const std::vector<int>& rows) {
    require_rank2(a, "gather_rows");
    const int m = a->value.shape[0], n = a->value.shape[1];
    if (rows.empty()) throw NumericError("gather_rows: empty row list");
    for (int r : rows) {
        if (r < 0 || r >= m) {
            throw NumericError("gather_rows: row " + std::to_string(r) + " out of range [0, " +
                               std::to_string(m) + ")");
        }
    }
    const int t = static_cast<int>(rows.size());
    Tensor out({t, n});
    for (int i = 0; i < t; ++i) {
        const double* src = a->value.row_ptr(rows[i]);
        std::copy(src, src + n, out.row_ptr(i));
    }
    auto node = new_node("gather_rows", std::move(out), {a});
    Node* self = node.get();
    Node* pa = a.get();
    node->backprop = [self, pa, rows, t, n] {
        if (!pa->requires_grad) return;
        Tensor& g = pa->ensure_grad();
        for (int i = 0; i < t; ++i) {
            const double* src = self->grad.row_ptr(i);
            double* dst = g.row_ptr(rows[i]);
            for (int j = 0; j < n; ++j) dst[j] += src[j];
        }
    };
    return node;
}

NodeRef concat_cols(const std::vector<NodeRef>& parts) {
    if (parts.empty()) throw NumericError("concat_cols: no inputs");
    const int m = parts[0]->value.shape[0];
    int total = 0;
    for (const auto& p : parts) {
        require_rank2(p, "concat_cols");
        if (p->value.shape[0] != m) {
            throw NumericError("concat_cols: row counts disagree");
        }
        total += p->value.shape[1];
    }
    Tensor out({m, total});
    int off = 0;
    for (const auto& p : parts) {
        const int w = p->value.shape[1];
        for (int i = 0; i < m; ++i) {
            const double* src = p->value.row_ptr(i);
            std::copy(src, src + w, out.row_ptr(i) + off);
        }
        off += w;
    }
    auto node = new_node("concat_cols", std::move(out), parts);
    Node* self = node.get();
    std::vector<Node*> raw;
    raw.reserve(parts.size());
    for (const auto& p : parts) raw.push_back(p.get());
    node->backprop = [self, raw, m] {
        int off = 0;
        for (Node* p : raw) {
            const int w = p->value.shape[1];
            if (p->requires_grad) {
                Tensor& g = p->ensure_grad();
                for (int i = 0; i < m; ++i) {
                    const double* src = self->grad.row_ptr(i) + off;
                    double* dst = g.row_ptr(i);
                    for (int j = 0; j < w; ++j) dst[j] += src[j];
                }
            }
            off += w;
        }
    };
    return node;
}

NodeRef dropout(const NodeRef& a, double p, Rng& rng) {
    if (p < 0.0 || p >= 1.0) throw NumericError("dropout: probability must be in [0, 1)");
    if (p == 0.0) return a;
    const double keep = 1.0 - p;
    const double inv_keep = 1.0 / keep;
    std::bernoulli_distribution dist(keep);
    std::vector<double> mask(a->value.data.size());
    Tensor out = a->value;
    for (size_t i = 0; i < mask.size(); ++i) {
        mask[i] = dist(rng) ? inv_keep : 0.0;
        out.data[i] *= mask[i];
    }
    auto node = new_node("dropout", std::move(out), {a});
    Node* self = node.get();
    Node* pa = a.get();
    node->backprop = [self, pa, mask = std::move(mask)] {
        if (!pa->requires_grad) return;
        Tensor& g = pa->ensure_grad();
        for (size_t i = 0; i < g.data.size(); ++i) g.data[i] += self->grad.data[i] * mask[i];
    };
    return node;
}

NodeRef seq_cross_entropy(const NodeRef& logits, const std::vector<int>& targets) {
    require_rank2(logits, "seq_cross_entropy");
    const int t = logits->value.shape[0], v = logits->value.shape[1];
    if (static_cast<int>(targets.size()) != t) {
        throw NumericError("seq_cross_entropy: " + std::to_string(targets.size()) +
                           " targets for " + std::to_string(t) + " logit rows");
    }
    for (int y : targets) {
        if (y < 0 || y >= v) {
            throw NumericError("seq_cross_entropy: target id " + std::to_string(y) +
                               " out of range [0, " + std::to_string(v) + ")");
        }
    }
    Tensor probs({t, v});
    double loss = 0.0;
    for (int i = 0; i < t; ++i) {
        softmax_row(logits->value.row_ptr(i), probs.row_ptr(i), v);
        loss -= std::log(probs.at(i, targets[i]));
    }
    auto node = new_node("seq_cross_entropy", Tensor({1}, {loss}), {logits});
    Node* self = node.get();
    Node* pl = logits.get();
    node->backprop = [self, pl, targets, probs = std::move(probs), t, v] {
        if (!pl->requires_grad) return;
        const double dl = self->grad.data[0];
        Tensor& g = pl->ensure_grad();
        for (int i = 0; i < t; ++i) {
            const double* p = probs.row_ptr(i);
            double* dst = g.row_ptr(i);
            for (int j = 0; j < v; ++j) dst[j] += dl * p[j];
            dst[targets[i]] -= dl;
        }
    };
    return node;
}

NodeRef add_scalars(const std::vector<NodeRef>& terms) {
    if (terms.empty()) throw NumericError("add_scalars: no inputs");
    double sum = 0.0;
    for (const auto& term : terms) {
        if (term->value.numel() != 1) {
            throw NumericError("add_scalars: all inputs must be scalar");
        }
        sum += term->value.data[0];
    }
    auto node = new_node("add_scalars", Tensor({1}, {sum}), terms);
    Node* self = node.get();
    std::vector<Node*> raw;
    raw.reserve(terms.size());
    for (const auto& term : terms) raw.push_back(term.get());
    node->backprop = [self, raw] {
        for (Node* term : raw) {
            if (term->requires_grad) term->ensure_grad().data[0] += self->grad.data[0];
        }
    };
    return node;
}

void backward(const NodeRef& loss) {
    if (!loss) throw NumericError("backward: null node");
    if (loss->value.numel() != 1) {
        throw NumericError("backward: loss must be scalar, got shape " +
                           shape_str(loss->value.shape));
    }
    // Iterative post-order DFS; inputs visited in construction order, so the
    // resulting traversal (and therefore float summation order) is fixed.
    std::vector<Node*> order;
    std::unordered_set<Node*> seen;
    struct Frame {
        Node* node;
        size_t next_input;
    };
    std::vector<Frame> stack;
    if (seen.insert(loss.get()).second) stack.push_back({loss.get(), 0});
    while (!stack.empty()) {
        Frame& top = stack.back();
        if (top.next_input < top.node->inputs.size()) {
            Node* child = top.node->inputs[top.next_input++].get();
            if (seen.insert(child).second) stack.push_back({child, 0});
        } else {
            order.push_back(top.node);
            stack.pop_back();
        }
    }
    // Interior grads are scratch per call; leaf grads persist and accumulate.
    for (Node* n : order) {
        if (!n->is_leaf) {
            n->ensure_grad().fill(0.0);
        } else if (n->requires_grad) {
            n->ensure_grad();
        }
    }
    loss->grad.data[0] = 1.0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        Node* n = *it;
        if (n->backprop && n->requires_grad) n->backprop();
    }
}

Tensor softmax_vec(const Tensor& logits) {
    if (logits.numel() == 0) throw NumericError("softmax: empty input");
    if (!all_finite(logits)) throw NumericError("softmax: non-finite input");
    Tensor out(logits.shape);
    softmax_row(logits.data.data(), out.data.data(), static_cast<int>(logits.numel()));
    return out;
}

double cross_entropy_value(const Tensor& logits, int target) {
    const int n = static_cast<int>(logits.numel());
    if (target < 0 || target >= n) {
        throw NumericError("cross_entropy: target " + std::to_string(target) +
                           " out of range [0, " + std::to_string(n) + ")");
    }
    const Tensor p = softmax_vec(logits);
    return -std::log(p.data[static_cast<size_t>(target)]);
}

}  // namespace kedial
