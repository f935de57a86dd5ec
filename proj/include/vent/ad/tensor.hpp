#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace vent::ad {

// Define-by-run reverse-mode tape over dense row-major 2D tensors, 64-bit
// throughout. Creation order doubles as the topological order, so backward
// is a single reverse sweep. A graph lives on one thread; independent
// graphs (ensemble members, parallel scenarios) never share nodes.
struct Node {
    int rows = 0;
    int cols = 0;
    std::vector<double> val;
    std::vector<double> grad;
    std::vector<std::shared_ptr<Node>> parents;
    std::function<void(Node&)> back;  // += this->grad into parent grads
    bool requires_grad = false;
    long id = 0;

    size_t size() const { return val.size(); }
};

class Tensor {
public:
    Tensor() = default;

    static Tensor leaf(int rows, int cols, std::vector<double> values,
                       bool requires_grad = true);
    static Tensor zeros(int rows, int cols, bool requires_grad = false);
    static Tensor constant(int rows, int cols, double value);
    static Tensor scalar(double value);

    bool defined() const { return static_cast<bool>(n_); }
    int rows() const { return n_->rows; }
    int cols() const { return n_->cols; }
    size_t size() const { return n_->size(); }
    const std::vector<double>& value() const { return n_->val; }
    std::vector<double>& mutable_value() { return n_->val; }
    const std::vector<double>& grad() const { return n_->grad; }
    bool requires_grad() const { return n_->requires_grad; }
    double item() const;
    std::string shape_str() const;

    Node* node() const { return n_.get(); }
    std::shared_ptr<Node> handle() const { return n_; }

private:
    explicit Tensor(std::shared_ptr<Node> n) : n_(std::move(n)) {}
    std::shared_ptr<Node> n_;

    friend Tensor make_op(int rows, int cols, std::vector<Tensor> parents,
                          std::function<void(Node&)> back);
};

// Populates `grad` on every node reachable from `output` (which must be a
// 1x1 scalar), seeding d(output)/d(output) = 1.
void backward(const Tensor& output);

// --- elementwise / broadcast binary ops -----------------------------------
// The right operand may share the full shape, be a 1xC row, an Rx1 column,
// or a 1x1 scalar; mismatches throw with both shapes in the message.
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor div(const Tensor& a, const Tensor& b);

Tensor add_scalar(const Tensor& a, double c);
Tensor mul_scalar(const Tensor& a, double c);

// --- structure ops ---------------------------------------------------------
Tensor matmul(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& a);
Tensor concat(const std::vector<Tensor>& parts, int axis);
Tensor slice(const Tensor& a, int r0, int r1, int c0, int c1);

// --- reductions (axis = -1 all, 0 over rows, 1 over cols) ------------------
Tensor sum(const Tensor& a, int axis = -1);
Tensor mean(const Tensor& a, int axis = -1);

// --- nonlinearities ---------------------------------------------------------
Tensor exp(const Tensor& a);
Tensor log(const Tensor& a);
Tensor sqrt(const Tensor& a);
Tensor tanh(const Tensor& a);
Tensor softplus(const Tensor& a);
Tensor softmax(const Tensor& a, int axis = 1);

inline Tensor operator+(const Tensor& a, const Tensor& b) { return add(a, b); }
inline Tensor operator-(const Tensor& a, const Tensor& b) { return sub(a, b); }
inline Tensor operator*(const Tensor& a, const Tensor& b) { return mul(a, b); }
inline Tensor operator/(const Tensor& a, const Tensor& b) { return div(a, b); }

}  // namespace vent::ad
