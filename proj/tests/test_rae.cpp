#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <tuple>

#include "mwprec/rae.hpp"
#include "mwprec/rng.hpp"

using namespace mwprec;

namespace {

FeatureMap<float> random_input(uint64_t seed, int len) {
    Rng rng(seed);
    FeatureMap<float> x(1, len);
    for (auto& v : x.values) v = static_cast<float>(rng.uniform(-0.9, 0.9));
    return x;
}

} // namespace

TEST_CASE("standard architecture has the frozen parameter count") {
    const auto net = Rae<float>::standard();
    CHECK(net.param_count() == kRaeStandardParamCount); // 41081, computed independently
    // layer shape spot checks straight from the table
    CHECK(net.layers[0].out_channels == 32);
    CHECK(net.layers[0].kernel_width == 5);
    CHECK(net.layers[4].stride == 1);
    CHECK(net.layers[8].kernel_width == 7);
    CHECK(net.layers[8].out_channels == 1);
}

TEST_CASE("zero parameters give the exact residual identity") {
    for (int L : {16, 256, 4096}) {
        const auto net = Rae<float>::standard(); // zero-initialized weights
        const auto x = random_input(100 + L, L);
        const auto [y, cache] = rae_forward(x, net);
        REQUIRE(y.length == L);
        for (int i = 0; i < L; ++i) CHECK(y.values[i] == x.values[i]);
    }
}

TEST_CASE("shape chain: conv L/2..L/16, deconv back to L; bottleneck 44 x L/16") {
    auto net = Rae<float>::standard();
    net.init_params(7);
    const int L = 4096;
    const auto x = random_input(42, L);
    const auto [y, cache] = rae_forward(x, net);
    CHECK(y.length == L);
    const int expected[kRaeLayers] = {L,     L / 2, L / 4, L / 8, L / 16,
                                      L / 16, L / 8, L / 4, L / 2};
    for (int i = 0; i < kRaeLayers; ++i) CHECK(cache.layer_inputs[i].length == expected[i]);
    CHECK(cache.bottleneck().channels == 44);
    CHECK(cache.bottleneck().length == 256);
    CHECK(cache.residual.length == L);
}

TEST_CASE("residual is Tanh-bounded: |y - x| < 1 everywhere") {
    auto net = Rae<float>::standard();
    net.init_params(99);
    // scale weights up to push the final Tanh toward saturation
    for (auto& l : net.layers)
        for (auto& w : l.weights) w *= 3.0f;
    const auto x = random_input(4242, 256);
    const auto [y, cache] = rae_forward(x, net);
    for (int i = 0; i < 256; ++i) CHECK(std::fabs(y.values[i] - x.values[i]) < 1.0);
}

TEST_CASE("input length must be a positive multiple of 16") {
    const auto net = Rae<float>::standard();
    for (int L : {1, 8, 17, 100, 4095}) {
        const auto x = random_input(1, L);
        CHECK_THROWS_WITH_AS(std::ignore = rae_forward(x, net),
                             doctest::Contains("multiple of 16"), PreconditionError);
    }
}

TEST_CASE("init_params: seeded determinism, zero biases, He-scaled first layer") {
    auto a = Rae<float>::standard();
    auto b = Rae<float>::standard();
    a.init_params(1234);
    b.init_params(1234);
    for (int i = 0; i < kRaeLayers; ++i) {
        CHECK(a.layers[i].weights == b.layers[i].weights);
        for (float bias : a.layers[i].bias) CHECK(bias == 0.0f);
    }
    auto c = Rae<float>::standard();
    c.init_params(1235);
    CHECK(a.layers[0].weights != c.layers[0].weights);

    // empirical std of the 160 first-layer weights ~ sqrt(2/(1*5)) within 10%
    double sum = 0.0, sq = 0.0;
    for (float w : a.layers[0].weights) {
        sum += w;
        sq += static_cast<double>(w) * w;
    }
    const double n = static_cast<double>(a.layers[0].weights.size());
    const double stddev = std::sqrt(sq / n - (sum / n) * (sum / n));
    const double he = std::sqrt(2.0 / 5.0);
    CHECK(stddev > 0.9 * he);
    CHECK(stddev < 1.1 * he);
}

TEST_CASE("mae loss: direct evaluation and gradient") {
    FeatureMap<float> y(1, 2), ref(1, 2);
    y.values = {1.0f, 2.0f};
    ref.values = {0.0f, 0.0f};
    const auto [loss, grad] = mae_loss(y, ref);
    CHECK(loss == doctest::Approx(1.5));
    CHECK(grad.values[0] == 0.5f);
    CHECK(grad.values[1] == 0.5f);

    const auto [zloss, zgrad] = mae_loss(y, y);
    CHECK(zloss == 0.0);
    for (float g : zgrad.values) CHECK(g == 0.0f);

    FeatureMap<float> wrong(1, 3);
    CHECK_THROWS_AS(std::ignore = mae_loss(y, wrong), PreconditionError);
}

TEST_CASE("backward: zero loss gradient zeroes every parameter gradient") {
    auto net = Rae<float>::reduced();
    net.init_params(5);
    const auto x = random_input(6, 32);
    const auto [y, cache] = rae_forward(x, net);
    const FeatureMap<float> zero(1, 32);
    const auto grads = rae_backward(cache, net, zero);
    for (const auto& l : grads.layers) {
        for (float g : l.weights) CHECK(g == 0.0f);
        for (float g : l.bias) CHECK(g == 0.0f);
    }
    for (float g : grads.grad_input.values) CHECK(g == 0.0f);
}

TEST_CASE("backward with zero weights reduces to the skip path alone") {
    const auto net = Rae<float>::reduced(); // zero weights
    const auto x = random_input(8, 32);
    const auto [y, cache] = rae_forward(x, net);
    Rng rng(77);
    FeatureMap<float> lg(1, 32);
    for (auto& v : lg.values) v = static_cast<float>(rng.uniform(-1.0, 1.0));
    const auto grads = rae_backward(cache, net, lg);
    for (int i = 0; i < 32; ++i) CHECK(grads.grad_input.values[i] == lg.values[i]);
}

TEST_CASE("mismatched cache is rejected") {
    auto small = Rae<float>::reduced();
    small.init_params(3);
    auto big = Rae<float>::standard();
    big.init_params(3);
    const auto x = random_input(9, 32);
    const auto [y, cache] = rae_forward(x, small);
    FeatureMap<float> lg(1, 32);
    CHECK_THROWS_AS(std::ignore = rae_backward(cache, big, lg), PreconditionError);
    FeatureMap<float> wrong_len(1, 16);
    CHECK_THROWS_AS(std::ignore = rae_backward(cache, small, wrong_len), PreconditionError);
}

TEST_CASE("full-network gradient matches finite differences on the reduced RAE") {
    // 64-bit end-to-end check with the MAE training loss
    auto net = Rae<double>::reduced();
    net.init_params(2718);
    const int L = 32;
    Rng rng(1618);
    FeatureMap<double> x(1, L), ref(1, L);
    for (auto& v : x.values) v = rng.uniform(-0.9, 0.9);
    for (auto& v : ref.values) v = rng.uniform(-0.9, 0.9);

    auto loss_of = [&]() {
        const auto [y, cache] = rae_forward(x, net);
        return mae_loss(y, ref).first;
    };

    // keep finite differences away from ReLU/MAE kinks
    {
        FeatureMap<double> h = x;
        const auto [y, cache] = rae_forward(x, net);
        for (size_t i = 0; i < y.values.size(); ++i)
            REQUIRE(std::fabs(y.values[i] - ref.values[i]) > 1e-4);
        for (int li = 0; li < kRaeConvLayers; ++li) {
            const auto& post = cache.layer_inputs[li + 1];
            int nonzero = 0;
            for (double v : post.values)
                if (v != 0.0) {
                    ++nonzero;
                    REQUIRE(std::fabs(v) > 1e-4);
                }
            REQUIRE(nonzero > 0); // layer must be alive for the check to mean anything
        }
    }

    const auto [y0, cache0] = rae_forward(x, net);
    const auto [l0, lgrad] = mae_loss(y0, ref);
    const auto grads = rae_backward(cache0, net, lgrad);

    const double h = 1e-5;
    int checked = 0;
    for (int li = 0; li < kRaeLayers; ++li) {
        auto check_param = [&](double& p, double analytic) {
            p += h;
            const double lp = loss_of();
            p -= 2 * h;
            const double lm = loss_of();
            p += h;
            const double fd = (lp - lm) / (2 * h);
            const double denom = std::max({std::fabs(fd), std::fabs(analytic), 1e-8});
            CHECK(std::fabs(fd - analytic) / denom < 1e-4);
            ++checked;
        };
        for (size_t i = 0; i < net.layers[li].weights.size(); ++i)
            check_param(net.layers[li].weights[i], grads.layers[li].weights[i]);
        for (size_t i = 0; i < net.layers[li].bias.size(); ++i)
            check_param(net.layers[li].bias[i], grads.layers[li].bias[i]);
    }
    CHECK(checked == 545); // every parameter of the reduced net
}
