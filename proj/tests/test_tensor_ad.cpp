#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "vent/ad/checkpoint.hpp"
#include "vent/ad/optim.hpp"
#include "vent/ad/tensor.hpp"
#include "vent/rng.hpp"

#include <cmath>
#include <filesystem>
#include <functional>

using namespace vent;
using namespace vent::ad;

namespace {

std::vector<double> random_values(Rng& rng, size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform(lo, hi);
    return v;
}

// Central finite differences against the tape, mixed absolute/relative:
// |ad - fd| <= tol * max(1, |ad|, |fd|) per component.
void gradcheck(const std::function<Tensor(std::vector<Tensor>&)>& f, std::vector<Tensor> leaves,
               double tol = 1e-4, double eps = 1e-5) {
    Tensor out = f(leaves);
    backward(out);
    std::vector<std::vector<double>> ad_grads;
    for (auto& l : leaves) ad_grads.push_back(l.grad());

    for (size_t li = 0; li < leaves.size(); ++li) {
        auto& vals = leaves[li].mutable_value();
        for (size_t n = 0; n < vals.size(); ++n) {
            const double keep = vals[n];
            vals[n] = keep + eps;
            const double fp = f(leaves).item();
            vals[n] = keep - eps;
            const double fm = f(leaves).item();
            vals[n] = keep;
            const double fd = (fp - fm) / (2.0 * eps);
            const double ad = ad_grads[li][n];
            const double scale = std::max({1.0, std::abs(ad), std::abs(fd)});
            INFO("leaf ", li, " component ", n, " ad=", ad, " fd=", fd);
            CHECK(std::abs(ad - fd) <= tol * scale);
        }
    }
}

}  // namespace

TEST_CASE("matmul forward matches hand arithmetic") {
    auto a = Tensor::leaf(2, 3, {1, 2, 3, 4, 5, 6});
    auto b = Tensor::leaf(3, 2, {7, 8, 9, 10, 11, 12});
    auto c = matmul(a, b);
    // [1 2 3; 4 5 6] * [7 8; 9 10; 11 12] = [58 64; 139 154]
    CHECK(c.value() == std::vector<double>{58, 64, 139, 154});
    CHECK_THROWS_AS(matmul(a, a), std::invalid_argument);
}

TEST_CASE("softmax of identical logits is uniform; softplus(0) = ln 2") {
    auto x = Tensor::constant(2, 5, 3.7);
    auto y = softmax(x);
    for (double v : y.value()) CHECK(v == doctest::Approx(0.2).epsilon(1e-12));

    auto z = softplus(Tensor::scalar(0.0));
    CHECK(z.item() == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("backward on simple closed forms") {
    auto x = Tensor::leaf(1, 1, {3.0});
    auto y = mul(x, x);
    backward(y);
    CHECK(x.grad()[0] == doctest::Approx(6.0).epsilon(1e-12));

    auto a = Tensor::leaf(1, 1, {2.0});
    auto b = Tensor::leaf(1, 1, {5.0});
    auto p = mul(a, b);
    backward(p);
    CHECK(a.grad()[0] == doctest::Approx(5.0));
    CHECK(b.grad()[0] == doctest::Approx(2.0));

    CHECK_THROWS_AS(backward(Tensor::leaf(2, 2, {1, 2, 3, 4})), std::invalid_argument);
}

TEST_CASE("gradcheck: elementwise ops with every broadcast class") {
    Rng rng(101);
    for (int seed = 0; seed < 4; ++seed) {
        auto a = Tensor::leaf(3, 4, random_values(rng, 12, 0.5, 2.0));
        auto full = Tensor::leaf(3, 4, random_values(rng, 12, 0.5, 2.0));
        auto row = Tensor::leaf(1, 4, random_values(rng, 4, 0.5, 2.0));
        auto col = Tensor::leaf(3, 1, random_values(rng, 3, 0.5, 2.0));
        auto sc = Tensor::leaf(1, 1, random_values(rng, 1, 0.5, 2.0));

        for (const Tensor& b : {full, row, col, sc}) {
            gradcheck([&](std::vector<Tensor>& l) { return sum(add(l[0], l[1])); }, {a, b});
            gradcheck([&](std::vector<Tensor>& l) { return sum(sub(l[0], l[1])); }, {a, b});
            gradcheck([&](std::vector<Tensor>& l) { return sum(mul(l[0], l[1])); }, {a, b});
            gradcheck([&](std::vector<Tensor>& l) { return sum(div(l[0], l[1])); }, {a, b});
        }
    }
    auto a = Tensor::leaf(3, 4, random_values(rng, 12, 0.5, 2.0));
    auto wrong = Tensor::leaf(2, 4, random_values(rng, 8, 0.5, 2.0));
    CHECK_THROWS_WITH_AS(add(a, wrong), doctest::Contains("(3x4)"), std::invalid_argument);
}

TEST_CASE("gradcheck: structure and reduction ops") {
    Rng rng(202);
    for (int seed = 0; seed < 4; ++seed) {
        auto a = Tensor::leaf(3, 4, random_values(rng, 12, -1.5, 1.5));
        auto b = Tensor::leaf(4, 2, random_values(rng, 8, -1.5, 1.5));
        gradcheck([&](std::vector<Tensor>& l) { return sum(matmul(l[0], l[1])); }, {a, b});
        gradcheck([&](std::vector<Tensor>& l) {
            return sum(mul(transpose(l[0]), transpose(l[0])));
        }, {a});

        auto c = Tensor::leaf(2, 4, random_values(rng, 8, -1.5, 1.5));
        gradcheck([&](std::vector<Tensor>& l) {
            return sum(mul(concat({l[0], l[1]}, 0), concat({l[0], l[1]}, 0)));
        }, {a, c});
        auto d = Tensor::leaf(3, 2, random_values(rng, 6, -1.5, 1.5));
        gradcheck([&](std::vector<Tensor>& l) {
            auto cat = concat({l[0], l[1]}, 1);
            return sum(mul(cat, cat));
        }, {a, d});
        gradcheck([&](std::vector<Tensor>& l) {
            auto s = slice(l[0], 1, 3, 0, 2);
            return sum(mul(s, s));
        }, {a});

        for (int axis : {-1, 0, 1}) {
            gradcheck([&, axis](std::vector<Tensor>& l) {
                return sum(mul(sum(l[0], axis), sum(l[0], axis)));
            }, {a});
            gradcheck([&, axis](std::vector<Tensor>& l) {
                return sum(mul(mean(l[0], axis), mean(l[0], axis)));
            }, {a});
        }
    }
}

TEST_CASE("gradcheck: nonlinearities") {
    Rng rng(303);
    for (int seed = 0; seed < 4; ++seed) {
        auto x = Tensor::leaf(2, 5, random_values(rng, 10, -2.0, 2.0));
        auto pos = Tensor::leaf(2, 5, random_values(rng, 10, 0.3, 3.0));
        gradcheck([&](std::vector<Tensor>& l) { return sum(exp(l[0])); }, {x});
        gradcheck([&](std::vector<Tensor>& l) { return sum(log(l[0])); }, {pos});
        gradcheck([&](std::vector<Tensor>& l) { return sum(sqrt(l[0])); }, {pos});
        gradcheck([&](std::vector<Tensor>& l) { return sum(tanh(l[0])); }, {x});
        gradcheck([&](std::vector<Tensor>& l) { return sum(softplus(l[0])); }, {x});
        gradcheck([&](std::vector<Tensor>& l) {
            auto w = Tensor::leaf(5, 3, random_values(rng, 15, -0.2, 0.2), false);
            return sum(mul(softmax(l[0]), matmul(l[0], w)));
        }, {x}, 2e-4);
    }
}

TEST_CASE("gradcheck: random 3-layer composites over 20 seeds") {
    for (int seed = 0; seed < 20; ++seed) {
        Rng rng(1000 + static_cast<std::uint64_t>(seed));
        auto x = Tensor::leaf(1, 6, random_values(rng, 6, -1.0, 1.0));
        auto w1 = Tensor::leaf(6, 8, random_values(rng, 48, -0.5, 0.5));
        auto b1 = Tensor::leaf(1, 8, random_values(rng, 8, -0.2, 0.2));
        auto w2 = Tensor::leaf(8, 8, random_values(rng, 64, -0.5, 0.5));
        auto w3 = Tensor::leaf(8, 1, random_values(rng, 8, -0.5, 0.5));
        gradcheck(
            [&](std::vector<Tensor>& l) {
                auto h1 = tanh(add(matmul(l[0], l[1]), l[2]));
                auto h2 = softplus(matmul(h1, l[3]));
                return sum(matmul(h2, l[4]));
            },
            {x, w1, b1, w2, w3});
    }
}

TEST_CASE("backward is linear over shared leaves") {
    Rng rng(404);
    auto x = Tensor::leaf(2, 3, random_values(rng, 6, -1.0, 1.0));
    const double ca = 1.7, cb = -0.6;

    auto f = [&]() { return sum(mul(x, x)); };
    auto g = [&]() { return sum(tanh(x)); };

    backward(f());
    auto gf = x.grad();
    backward(g());
    auto gg = x.grad();
    backward(add(mul_scalar(f(), ca), mul_scalar(g(), cb)));
    auto gc = x.grad();
    for (size_t n = 0; n < gc.size(); ++n) {
        CHECK(gc[n] == doctest::Approx(ca * gf[n] + cb * gg[n]).epsilon(1e-10));
    }
}

TEST_CASE("adamw: fixed points, monotone descent, decoupled decay") {
    // Zero gradient and zero decay leave parameters untouched.
    {
        std::vector<Param> params{{"w", Tensor::leaf(1, 3, {1.0, -2.0, 3.0})}};
        auto loss = sum(mul_scalar(params[0].tensor, 0.0));
        backward(loss);
        AdamW opt(0.0);
        opt.step(params, 1e-2);
        CHECK(params[0].tensor.value() == std::vector<double>{1.0, -2.0, 3.0});
    }

    // Constant positive gradient: scalar decreases monotonically.
    {
        std::vector<Param> params{{"w", Tensor::leaf(1, 1, {0.7})}};
        AdamW opt(0.0);
        double prev = 0.7;
        for (int s = 0; s < 50; ++s) {
            auto loss = mul_scalar(params[0].tensor, 2.0);  // d/dw = 2
            backward(loss);
            opt.step(params, 1e-2);
            CHECK(params[0].tensor.value()[0] < prev);
            prev = params[0].tensor.value()[0];
        }
    }

    // Zero gradient with weight decay: geometric shrink toward zero.
    {
        std::vector<Param> params{{"w", Tensor::leaf(1, 1, {2.0})}};
        AdamW opt(0.1);
        const double lr = 0.05;
        double expect = 2.0;
        for (int s = 0; s < 20; ++s) {
            auto loss = sum(mul_scalar(params[0].tensor, 0.0));
            backward(loss);
            opt.step(params, lr);
            expect *= 1.0 - lr * 0.1;
            CHECK(params[0].tensor.value()[0] == doctest::Approx(expect).epsilon(1e-12));
        }
    }

    // NaN gradients abort with the parameter name.
    {
        std::vector<Param> params{{"encoder.w1", Tensor::leaf(1, 1, {1.0})}};
        auto bad = log(mul_scalar(params[0].tensor, -1.0));  // log of a negative
        backward(bad);
        AdamW opt(0.0);
        CHECK_THROWS_WITH_AS(opt.step(params, 1e-3), doctest::Contains("encoder.w1"),
                             std::runtime_error);
    }
}

TEST_CASE("cyclical_lr traces the triangular wave") {
    CHECK(cyclical_lr(0, 1e-4, 1e-3, 100) == doctest::Approx(1e-4));
    CHECK(cyclical_lr(50, 1e-4, 1e-3, 100) == doctest::Approx(1e-3));
    CHECK(cyclical_lr(100, 1e-4, 1e-3, 100) == doctest::Approx(1e-4));
    CHECK(cyclical_lr(25, 1e-4, 1e-3, 100) == doctest::Approx(5.5e-4));
    CHECK_THROWS_AS(cyclical_lr(1, 1e-4, 1e-3, 0), std::invalid_argument);
}

TEST_CASE("checkpoints round-trip tensors and metadata") {
    namespace fs = std::filesystem;
    Rng rng(55);
    std::vector<Param> params{
        {"w1", Tensor::leaf(3, 4, random_values(rng, 12, -1, 1))},
        {"b1", Tensor::leaf(1, 4, random_values(rng, 4, -1, 1))},
    };
    nlohmann::json meta{{"seed", 7}, {"norm_mean", 512.25}};
    const std::string path = "tmp_ckpt_test.bin";
    save_checkpoint(path, meta, params);
    auto ck = load_checkpoint(path);
    CHECK(ck.meta.at("seed").get<int>() == 7);
    CHECK(ck.meta.at("norm_mean").get<double>() == 512.25);
    CHECK(ck.find("w1").values == params[0].tensor.value());
    CHECK(ck.find("b1").rows == 1);
    CHECK_THROWS(ck.find("nope"));
    fs::remove(path);
}
