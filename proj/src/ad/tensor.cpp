#include "vent/ad/tensor.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace vent::ad {

namespace {

thread_local long g_next_id = 0;

using MatMap = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using ConstMatMap =
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

std::string shape_of(int r, int c) {
    return "(" + std::to_string(r) + "x" + std::to_string(c) + ")";
}

[[noreturn]] void shape_error(const char* op, const Node& a, const Node& b) {
    throw std::invalid_argument(std::string(op) + ": shape mismatch " +
                                shape_of(a.rows, a.cols) + " vs " + shape_of(b.rows, b.cols));
}

// Broadcast class of operand b against operand a.
enum class BCast { Same, Row, Col, Scalar };

BCast bcast_of(const char* op, const Node& a, const Node& b) {
    if (b.rows == a.rows && b.cols == a.cols) return BCast::Same;
    if (b.rows == 1 && b.cols == 1) return BCast::Scalar;
    if (b.rows == 1 && b.cols == a.cols) return BCast::Row;
    if (b.cols == 1 && b.rows == a.rows) return BCast::Col;
    shape_error(op, a, b);
}

inline size_t bindex(BCast bc, int r, int c, int cols) {
    switch (bc) {
        case BCast::Same: return static_cast<size_t>(r) * cols + c;
        case BCast::Row: return static_cast<size_t>(c);
        case BCast::Col: return static_cast<size_t>(r);
        default: return 0;
    }
}

void ensure_grad(Node& n) {
    if (n.grad.size() != n.val.size()) n.grad.assign(n.val.size(), 0.0);
}

}  // namespace

Tensor make_op(int rows, int cols, std::vector<Tensor> parents,
               std::function<void(Node&)> back) {
    auto n = std::make_shared<Node>();
    n->rows = rows;
    n->cols = cols;
    n->val.resize(static_cast<size_t>(rows) * cols);
    n->id = ++g_next_id;
    bool rg = false;
    for (const auto& p : parents) {
        n->parents.push_back(p.handle());
        rg = rg || p.requires_grad();
    }
    n->requires_grad = rg;
    if (rg) n->back = std::move(back);
    Tensor t(std::move(n));
    return t;
}

Tensor Tensor::leaf(int rows, int cols, std::vector<double> values, bool requires_grad) {
    if (values.size() != static_cast<size_t>(rows) * cols) {
        throw std::invalid_argument("leaf: value count does not match shape " +
                                    shape_of(rows, cols));
    }
    auto n = std::make_shared<Node>();
    n->rows = rows;
    n->cols = cols;
    n->val = std::move(values);
    n->requires_grad = requires_grad;
    n->id = ++g_next_id;
    return Tensor(std::move(n));
}

Tensor Tensor::zeros(int rows, int cols, bool requires_grad) {
    return leaf(rows, cols, std::vector<double>(static_cast<size_t>(rows) * cols, 0.0),
                requires_grad);
}

Tensor Tensor::constant(int rows, int cols, double value) {
    return leaf(rows, cols, std::vector<double>(static_cast<size_t>(rows) * cols, value), false);
}

Tensor Tensor::scalar(double value) { return constant(1, 1, value); }

double Tensor::item() const {
    if (size() != 1) throw std::invalid_argument("item() on non-scalar " + shape_str());
    return n_->val[0];
}

std::string Tensor::shape_str() const { return shape_of(n_->rows, n_->cols); }

void backward(const Tensor& output) {
    Node* out = output.node();
    if (!out) throw std::invalid_argument("backward on an empty tensor");
    if (out->size() != 1) {
        throw std::invalid_argument("backward requires a scalar output, got " +
                                    output.shape_str());
    }

    // Reachable subgraph, then reverse creation order.
    std::vector<Node*> order;
    std::unordered_set<Node*> seen;
    std::vector<Node*> stack{out};
    seen.insert(out);
    while (!stack.empty()) {
        Node* n = stack.back();
        stack.pop_back();
        order.push_back(n);
        for (const auto& p : n->parents) {
            if (p->requires_grad && seen.insert(p.get()).second) stack.push_back(p.get());
        }
    }
    std::sort(order.begin(), order.end(), [](Node* a, Node* b) { return a->id > b->id; });

    for (Node* n : order) n->grad.assign(n->val.size(), 0.0);
    out->grad[0] = 1.0;
    for (Node* n : order) {
        if (n->back) n->back(*n);
    }
}

// --- binary ops -------------------------------------------------------------

namespace {

template <typename FwdOp>
Tensor binary_op(const char* name, const Tensor& a, const Tensor& b, FwdOp fwd,
                 std::function<void(Node&, Node&, Node&, BCast)> back) {
    const Node& an = *a.node();
    const Node& bn = *b.node();
    const BCast bc = bcast_of(name, an, bn);
    Node* ap = a.node();
    Node* bp = b.node();
    Tensor out = make_op(an.rows, an.cols, {a, b}, [ap, bp, bc, back](Node& self) {
        back(self, *ap, *bp, bc);
    });
    Node& on = *out.node();
    for (int r = 0; r < an.rows; ++r) {
        for (int c = 0; c < an.cols; ++c) {
            const size_t ia = static_cast<size_t>(r) * an.cols + c;
            on.val[ia] = fwd(an.val[ia], bn.val[bindex(bc, r, c, bn.cols)]);
        }
    }
    return out;
}

}  // namespace

Tensor add(const Tensor& a, const Tensor& b) {
    return binary_op(
        "add", a, b, [](double x, double y) { return x + y; },
        [](Node& self, Node& an, Node& bn, BCast bc) {
            if (an.requires_grad) {
                ensure_grad(an);
                for (size_t n = 0; n < self.grad.size(); ++n) an.grad[n] += self.grad[n];
            }
            if (bn.requires_grad) {
                ensure_grad(bn);
                for (int r = 0; r < self.rows; ++r) {
                    for (int c = 0; c < self.cols; ++c) {
                        bn.grad[bindex(bc, r, c, bn.cols)] +=
                            self.grad[static_cast<size_t>(r) * self.cols + c];
                    }
                }
            }
        });
}

Tensor sub(const Tensor& a, const Tensor& b) {
    return binary_op(
        "sub", a, b, [](double x, double y) { return x - y; },
        [](Node& self, Node& an, Node& bn, BCast bc) {
            if (an.requires_grad) {
                ensure_grad(an);
                for (size_t n = 0; n < self.grad.size(); ++n) an.grad[n] += self.grad[n];
            }
            if (bn.requires_grad) {
                ensure_grad(bn);
                for (int r = 0; r < self.rows; ++r) {
                    for (int c = 0; c < self.cols; ++c) {
                        bn.grad[bindex(bc, r, c, bn.cols)] -=
                            self.grad[static_cast<size_t>(r) * self.cols + c];
                    }
                }
            }
        });
}

Tensor mul(const Tensor& a, const Tensor& b) {
    return binary_op(
        "mul", a, b, [](double x, double y) { return x * y; },
        [](Node& self, Node& an, Node& bn, BCast bc) {
            if (an.requires_grad) {
                ensure_grad(an);
                for (int r = 0; r < self.rows; ++r) {
                    for (int c = 0; c < self.cols; ++c) {
                        const size_t ia = static_cast<size_t>(r) * self.cols + c;
                        an.grad[ia] += self.grad[ia] * bn.val[bindex(bc, r, c, bn.cols)];
                    }
                }
            }
            if (bn.requires_grad) {
                ensure_grad(bn);
                for (int r = 0; r < self.rows; ++r) {
                    for (int c = 0; c < self.cols; ++c) {
                        const size_t ia = static_cast<size_t>(r) * self.cols + c;
                        bn.grad[bindex(bc, r, c, bn.cols)] += self.grad[ia] * an.val[ia];
                    }
                }
            }
        });
}

Tensor div(const Tensor& a, const Tensor& b) {
    return binary_op(
        "div", a, b, [](double x, double y) { return x / y; },
        [](Node& self, Node& an, Node& bn, BCast bc) {
            if (an.requires_grad) {
                ensure_grad(an);
                for (int r = 0; r < self.rows; ++r) {
                    for (int c = 0; c < self.cols; ++c) {
                        const size_t ia = static_cast<size_t>(r) * self.cols + c;
                        an.grad[ia] += self.grad[ia] / bn.val[bindex(bc, r, c, bn.cols)];
                    }
                }
            }
            if (bn.requires_grad) {
                ensure_grad(bn);
                for (int r = 0; r < self.rows; ++r) {
                    for (int c = 0; c < self.cols; ++c) {
                        const size_t ia = static_cast<size_t>(r) * self.cols + c;
                        const size_t ib = bindex(bc, r, c, bn.cols);
                        bn.grad[ib] -= self.grad[ia] * an.val[ia] / (bn.val[ib] * bn.val[ib]);
                    }
                }
            }
        });
}

Tensor add_scalar(const Tensor& a, double c) { return add(a, Tensor::scalar(c)); }
Tensor mul_scalar(const Tensor& a, double c) { return mul(a, Tensor::scalar(c)); }

// --- structure ops ----------------------------------------------------------

Tensor matmul(const Tensor& a, const Tensor& b) {
    Node* an = a.node();
    Node* bn = b.node();
    if (an->cols != bn->rows) shape_error("matmul", *an, *bn);
    const int m = an->rows, k = an->cols, n = bn->cols;

    Tensor out = make_op(m, n, {a, b}, [an, bn, m, k, n](Node& self) {
        ConstMatMap G(self.grad.data(), m, n);
        if (an->requires_grad) {
            ensure_grad(*an);
            MatMap dA(an->grad.data(), m, k);
            ConstMatMap B(bn->val.data(), k, n);
            dA.noalias() += G * B.transpose();
        }
        if (bn->requires_grad) {
            ensure_grad(*bn);
            MatMap dB(bn->grad.data(), k, n);
            ConstMatMap A(an->val.data(), m, k);
            dB.noalias() += A.transpose() * G;
        }
    });
    MatMap O(out.node()->val.data(), m, n);
    ConstMatMap A(an->val.data(), m, k);
    ConstMatMap B(bn->val.data(), k, n);
    O.noalias() = A * B;
    return out;
}

Tensor transpose(const Tensor& a) {
    Node* an = a.node();
    const int m = an->rows, n = an->cols;
    Tensor out = make_op(n, m, {a}, [an, m, n](Node& self) {
        if (!an->requires_grad) return;
        ensure_grad(*an);
        for (int r = 0; r < n; ++r) {
            for (int c = 0; c < m; ++c) {
                an->grad[static_cast<size_t>(c) * n + r] +=
                    self.grad[static_cast<size_t>(r) * m + c];
            }
        }
    });
    Node& on = *out.node();
    for (int r = 0; r < m; ++r) {
        for (int c = 0; c < n; ++c) {
            on.val[static_cast<size_t>(c) * m + r] = an->val[static_cast<size_t>(r) * n + c];
        }
    }
    return out;
}

Tensor concat(const std::vector<Tensor>& parts, int axis) {
    if (parts.empty()) throw std::invalid_argument("concat of nothing");
    if (axis != 0 && axis != 1) throw std::invalid_argument("concat axis must be 0 or 1");
    const int fixed = axis == 0 ? parts[0].cols() : parts[0].rows();
    int total = 0;
    for (const auto& p : parts) {
        const int f = axis == 0 ? p.cols() : p.rows();
        if (f != fixed) shape_error("concat", *parts[0].node(), *p.node());
        total += axis == 0 ? p.rows() : p.cols();
    }
    const int rows = axis == 0 ? total : fixed;
    const int cols = axis == 0 ? fixed : total;

    std::vector<Node*> nodes;
    for (const auto& p : parts) nodes.push_back(p.node());
    Tensor out = make_op(rows, cols, parts, [nodes, axis, rows, cols](Node& self) {
        int off = 0;
        for (Node* p : nodes) {
            if (p->requires_grad) {
                ensure_grad(*p);
                if (axis == 0) {
                    for (int r = 0; r < p->rows; ++r) {
                        for (int c = 0; c < cols; ++c) {
                            p->grad[static_cast<size_t>(r) * cols + c] +=
                                self.grad[static_cast<size_t>(off + r) * cols + c];
                        }
                    }
                } else {
                    for (int r = 0; r < rows; ++r) {
                        for (int c = 0; c < p->cols; ++c) {
                            p->grad[static_cast<size_t>(r) * p->cols + c] +=
                                self.grad[static_cast<size_t>(r) * cols + off + c];
                        }
                    }
                }
            }
            off += axis == 0 ? p->rows : p->cols;
        }
    });
    Node& on = *out.node();
    int off = 0;
    for (Node* p : nodes) {
        if (axis == 0) {
            std::copy(p->val.begin(), p->val.end(),
                      on.val.begin() + static_cast<std::ptrdiff_t>(off) * cols);
            off += p->rows;
        } else {
            for (int r = 0; r < rows; ++r) {
                std::copy(p->val.begin() + static_cast<std::ptrdiff_t>(r) * p->cols,
                          p->val.begin() + static_cast<std::ptrdiff_t>(r + 1) * p->cols,
                          on.val.begin() + static_cast<std::ptrdiff_t>(r) * cols + off);
            }
            off += p->cols;
        }
    }
    return out;
}

Tensor slice(const Tensor& a, int r0, int r1, int c0, int c1) {
    Node* an = a.node();
    if (r0 < 0 || c0 < 0 || r1 > an->rows || c1 > an->cols || r0 >= r1 || c0 >= c1) {
        throw std::invalid_argument("slice [" + std::to_string(r0) + ":" + std::to_string(r1) +
                                    "," + std::to_string(c0) + ":" + std::to_string(c1) +
                                    "] out of range for " + shape_of(an->rows, an->cols));
    }
    const int m = r1 - r0, n = c1 - c0;
    Tensor out = make_op(m, n, {a}, [an, r0, c0, m, n](Node& self) {
        if (!an->requires_grad) return;
        ensure_grad(*an);
        for (int r = 0; r < m; ++r) {
            for (int c = 0; c < n; ++c) {
                an->grad[static_cast<size_t>(r0 + r) * an->cols + (c0 + c)] +=
                    self.grad[static_cast<size_t>(r) * n + c];
            }
        }
    });
    Node& on = *out.node();
    for (int r = 0; r < m; ++r) {
        for (int c = 0; c < n; ++c) {
            on.val[static_cast<size_t>(r) * n + c] =
                an->val[static_cast<size_t>(r0 + r) * an->cols + (c0 + c)];
        }
    }
    return out;
}

// --- reductions ---------------------------------------------------------------

Tensor sum(const Tensor& a, int axis) {
    Node* an = a.node();
    const int m = an->rows, n = an->cols;
    if (axis == -1) {
        Tensor out = make_op(1, 1, {a}, [an](Node& self) {
            if (!an->requires_grad) return;
            ensure_grad(*an);
            for (auto& g : an->grad) g += self.grad[0];
        });
        double s = 0.0;
        for (double v : an->val) s += v;
        out.node()->val[0] = s;
        return out;
    }
    if (axis == 0) {
        Tensor out = make_op(1, n, {a}, [an, m, n](Node& self) {
            if (!an->requires_grad) return;
            ensure_grad(*an);
            for (int r = 0; r < m; ++r) {
                for (int c = 0; c < n; ++c) {
                    an->grad[static_cast<size_t>(r) * n + c] += self.grad[static_cast<size_t>(c)];
                }
            }
        });
        Node& on = *out.node();
        std::fill(on.val.begin(), on.val.end(), 0.0);
        for (int r = 0; r < m; ++r) {
            for (int c = 0; c < n; ++c) on.val[static_cast<size_t>(c)] += an->val[static_cast<size_t>(r) * n + c];
        }
        return out;
    }
    if (axis == 1) {
        Tensor out = make_op(m, 1, {a}, [an, m, n](Node& self) {
            if (!an->requires_grad) return;
            ensure_grad(*an);
            for (int r = 0; r < m; ++r) {
                for (int c = 0; c < n; ++c) {
                    an->grad[static_cast<size_t>(r) * n + c] += self.grad[static_cast<size_t>(r)];
                }
            }
        });
        Node& on = *out.node();
        for (int r = 0; r < m; ++r) {
            double s = 0.0;
            for (int c = 0; c < n; ++c) s += an->val[static_cast<size_t>(r) * n + c];
            on.val[static_cast<size_t>(r)] = s;
        }
        return out;
    }
    throw std::invalid_argument("sum: axis must be -1, 0 or 1");
}

Tensor mean(const Tensor& a, int axis) {
    const double denom = axis == -1 ? static_cast<double>(a.size())
                         : axis == 0 ? static_cast<double>(a.rows())
                                     : static_cast<double>(a.cols());
    return mul_scalar(sum(a, axis), 1.0 / denom);
}

// --- nonlinearities -----------------------------------------------------------

namespace {

template <typename F, typename DfOfY>
Tensor unary_op(const Tensor& a, F f, DfOfY dody_from) {
    Node* an = a.node();
    Tensor out = make_op(an->rows, an->cols, {a}, [an, dody_from](Node& self) {
        if (!an->requires_grad) return;
        ensure_grad(*an);
        for (size_t n = 0; n < self.grad.size(); ++n) {
            an->grad[n] += self.grad[n] * dody_from(an->val[n], self.val[n]);
        }
    });
    Node& on = *out.node();
    for (size_t n = 0; n < on.val.size(); ++n) on.val[n] = f(an->val[n]);
    return out;
}

}  // namespace

Tensor exp(const Tensor& a) {
    return unary_op(a, [](double x) { return std::exp(x); },
                    [](double, double y) { return y; });
}

Tensor log(const Tensor& a) {
    return unary_op(a, [](double x) { return std::log(x); },
                    [](double x, double) { return 1.0 / x; });
}

Tensor sqrt(const Tensor& a) {
    return unary_op(a, [](double x) { return std::sqrt(x); },
                    [](double, double y) { return 0.5 / y; });
}

Tensor tanh(const Tensor& a) {
    return unary_op(a, [](double x) { return std::tanh(x); },
                    [](double, double y) { return 1.0 - y * y; });
}

Tensor softplus(const Tensor& a) {
    return unary_op(
        a,
        [](double x) {
            if (x > 30.0) return x;
            if (x < -30.0) return std::exp(x);
            return std::log1p(std::exp(x));
        },
        [](double x, double) { return 1.0 / (1.0 + std::exp(-x)); });
}

Tensor softmax(const Tensor& a, int axis) {
    if (axis != 1) throw std::invalid_argument("softmax: only axis 1 is supported");
    Node* an = a.node();
    const int m = an->rows, n = an->cols;
    Tensor out = make_op(m, n, {a}, [an, m, n](Node& self) {
        if (!an->requires_grad) return;
        ensure_grad(*an);
        for (int r = 0; r < m; ++r) {
            const size_t base = static_cast<size_t>(r) * n;
            double dot = 0.0;
            for (int c = 0; c < n; ++c) dot += self.grad[base + c] * self.val[base + c];
            for (int c = 0; c < n; ++c) {
                an->grad[base + c] += self.val[base + c] * (self.grad[base + c] - dot);
            }
        }
    });
    Node& on = *out.node();
    for (int r = 0; r < m; ++r) {
        const size_t base = static_cast<size_t>(r) * n;
        double mx = an->val[base];
        for (int c = 1; c < n; ++c) mx = std::max(mx, an->val[base + c]);
        double z = 0.0;
        for (int c = 0; c < n; ++c) {
            on.val[base + c] = std::exp(an->val[base + c] - mx);
            z += on.val[base + c];
        }
        for (int c = 0; c < n; ++c) on.val[base + c] /= z;
    }
    return out;
}

}  // namespace vent::ad
