#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "seqabs/error.hpp"
#include "seqabs/numeric/layers.hpp"
#include "seqabs/numeric/parameter_set.hpp"
#include "seqabs/numeric/random.hpp"
#include "seqabs/numeric/tape.hpp"

namespace seqabs {
namespace {

DenseArray matrix(std::size_t r, std::size_t c, std::vector<double> v) { return DenseArray({r, c}, std::move(v)); }

TEST(DenseArrayTest, RejectsShapeMismatchAndNonFinite) {
  EXPECT_THROW(DenseArray({2, 2}, {1.0, 2.0, 3.0}), InvalidInput);
  EXPECT_THROW(DenseArray({0}), InvalidInput);
  EXPECT_THROW(DenseArray::vector({1.0, NAN}), InvalidInput);
  const DenseArray a({2, 3});
  EXPECT_EQ(a.size(), 6u);
  EXPECT_EQ(a.rows(), 2u);
  EXPECT_EQ(a.cols(), 3u);
}

TEST(FcForwardTest, IdentityCase) {
  const auto y = fc_forward(std::vector<double>{1, 0}, matrix(2, 2, {1, 0, 0, 1}), DenseArray::vector({0, 0}));
  EXPECT_EQ(y, DenseArray::vector({1, 0}));
}

TEST(FcForwardTest, Arithmetic) {
  const auto y = fc_forward(std::vector<double>{1, 1}, matrix(2, 1, {2, 3}), DenseArray::vector({1}));
  EXPECT_EQ(y, DenseArray::vector({6}));
}

TEST(FcForwardTest, BiasOnly) {
  const auto y = fc_forward(std::vector<double>{0, 0, 0}, matrix(3, 1, {7, -2, 4}), DenseArray::vector({0.5}));
  EXPECT_EQ(y, DenseArray::vector({0.5}));
}

TEST(FcForwardTest, ShapeMismatchRejected) {
  EXPECT_THROW(fc_forward(std::vector<double>{1, 2, 3}, matrix(2, 1, {1, 1}), DenseArray::vector({0})), InvalidInput);
  EXPECT_THROW(fc_forward(std::vector<double>{1, 2}, matrix(2, 1, {1, 1}), DenseArray::vector({0, 0})), InvalidInput);
}

TEST(GruStepTest, ZeroParamsHalveHiddenState) {
  const auto p = GruParams::zeros(3, 4);
  const std::vector<double> h{0.3, -1.7, 2.25, 1e-3};
  const auto out = gru_step(std::vector<double>{5, -5, 1}, h, p);
  for (std::size_t i = 0; i < h.size(); ++i) EXPECT_EQ(out[i], 0.5 * h[i]);
}

TEST(GruStepTest, ZeroParamsZeroState) {
  const auto out = gru_step(std::vector<double>{1, 2, 3}, std::vector<double>(4, 0.0), GruParams::zeros(3, 4));
  for (double v : out.values()) EXPECT_EQ(v, 0.0);
}

// Element-wise reference written independently of the library kernels.
std::vector<double> reference_gru(const std::vector<double>& x, const std::vector<double>& h, const GruParams& p) {
  const auto D = x.size();
  const auto H = h.size();
  auto logistic = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
  std::vector<double> z(H), r(H), out(H);
  for (std::size_t j = 0; j < H; ++j) {
    double az = p.b_update[j], ar = p.b_reset[j];
    for (std::size_t i = 0; i < D; ++i) {
      az += x[i] * p.w_update.at(i, j);
      ar += x[i] * p.w_reset.at(i, j);
    }
    for (std::size_t i = 0; i < H; ++i) {
      az += h[i] * p.u_update.at(i, j);
      ar += h[i] * p.u_reset.at(i, j);
    }
    z[j] = logistic(az);
    r[j] = logistic(ar);
  }
  for (std::size_t j = 0; j < H; ++j) {
    double ac = p.b_cand[j];
    for (std::size_t i = 0; i < D; ++i) ac += x[i] * p.w_cand.at(i, j);
    for (std::size_t i = 0; i < H; ++i) ac += r[i] * h[i] * p.u_cand.at(i, j);
    out[j] = (1 - z[j]) * h[j] + z[j] * std::tanh(ac);
  }
  return out;
}

TEST(GruStepTest, MatchesElementwiseReference) {
  Rng rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    auto p = GruParams::zeros(3, 5);
    for (auto* a : {&p.w_update, &p.u_update, &p.b_update, &p.w_reset, &p.u_reset, &p.b_reset, &p.w_cand,
                    &p.u_cand, &p.b_cand}) {
      uniform_fill(*a, 0.5, rng);
    }
    std::vector<double> x(3), h(5);
    for (double& v : x) v = 2 * uniform01(rng) - 1;
    for (double& v : h) v = 2 * uniform01(rng) - 1;
    const auto got = gru_step(x, h, p);
    const auto want = reference_gru(x, h, p);
    for (std::size_t j = 0; j < 5; ++j) EXPECT_NEAR(got[j], want[j], 1e-12);
  }
}

TEST(GruStepTest, ShapeMismatchRejected) {
  const auto p = GruParams::zeros(2, 3);
  EXPECT_THROW(gru_step(std::vector<double>{1}, std::vector<double>(3), p), InvalidInput);
  EXPECT_THROW(gru_step(std::vector<double>{1, 2}, std::vector<double>(4), p), InvalidInput);
  auto bad = p;
  bad.u_cand = DenseArray({2, 3});
  EXPECT_THROW(gru_step(std::vector<double>{1, 2}, std::vector<double>(3), bad), InvalidInput);
}

TEST(SoftmaxTest, Examples) {
  const auto u = softmax(std::vector<double>{0, 0, 0});
  for (double p : u) EXPECT_NEAR(p, 1.0 / 3.0, 1e-15);
  const auto two = softmax(std::vector<double>{std::log(2.0), 0});
  EXPECT_NEAR(two[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(two[1], 1.0 / 3.0, 1e-15);
  EXPECT_EQ(softmax(std::vector<double>{5.7})[0], 1.0);
  EXPECT_THROW(softmax(std::vector<double>{}), InvalidInput);
}

TEST(SoftmaxTest, NormalizedAndShiftInvariant) {
  Rng rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const auto n = 1 + static_cast<std::size_t>(uniform01(rng) * 20);
    std::vector<double> l(n);
    for (double& v : l) v = (uniform01(rng) - 0.5) * 200;
    const double shift = (uniform01(rng) - 0.5) * 1000;
    auto shifted = l;
    for (double& v : shifted) v += shift;
    const auto p = softmax(l);
    const auto q = softmax(shifted);
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-6);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_NEAR(p[i], q[i], 1e-6);
      for (std::size_t j = 0; j < n; ++j) {
        if (l[i] < l[j]) EXPECT_LE(p[i], p[j]);
      }
    }
  }
}

TEST(TapeTest, LinearGradient) {
  ParameterSet params;
  params.add("w", DenseArray({1, 1}, {0.7}));
  Tape tape(params);
  const auto y = tape.matvec(tape.constant(DenseArray::vector({3.0})), tape.parameter(0));
  const auto g = tape.backward(y);
  EXPECT_EQ(g[0][0], 3.0);
}

TEST(TapeTest, LogSoftmaxGradientIdentity) {
  ParameterSet params;
  params.add("logits", DenseArray::vector({0.3, -1.1}));
  Tape tape(params);
  const auto lp = tape.log_softmax_pick(tape.parameter(0), 0);
  const auto g = tape.backward(lp);
  const auto p = softmax(params[0].values());
  EXPECT_NEAR(g[0][0], 1 - p[0], 1e-15);
  EXPECT_NEAR(g[0][1], -p[1], 1e-15);
}

TEST(TapeTest, SingleUseAndScalarOutput) {
  ParameterSet params;
  params.add("v", DenseArray::vector({1.0, 2.0}));
  Tape tape(params);
  const auto v = tape.tanh(tape.parameter(0));
  EXPECT_THROW(tape.backward(v), UsageError);
  const auto s = tape.log_softmax_pick(v, 1);
  EXPECT_NO_THROW(tape.backward(s));
  EXPECT_THROW(tape.backward(s), UsageError);
}

TEST(TapeTest, ReplayIsBitIdentical) {
  Rng rng(3);
  ParameterSet params;
  DenseArray w({4, 3});
  uniform_fill(w, 1.0, rng);
  params.add("w", w);
  params.add("b", DenseArray::vector({0.1, -0.2, 0.3}));
  Tape tape(params);
  const auto x = tape.constant(DenseArray::vector({0.5, -1.0, 2.0, 0.25}));
  const auto h = tape.tanh(tape.add(tape.matvec(x, tape.parameter(0)), tape.parameter(1)));
  const auto z = tape.sigmoid(h);
  const Tape::Var parts[] = {tape.mul(z, h), tape.one_minus(z)};
  const auto out = tape.log_softmax_pick(tape.concat(parts), 2);
  EXPECT_EQ(tape.replay(out), tape.value(out));
}

TEST(AscentStepTest, Examples) {
  ParameterSet theta;
  theta.add("t", DenseArray::vector({1.0}));
  ParameterSet g;
  g.add("t", DenseArray::vector({2.0}));
  ascent_step(theta, g, 0.1);
  EXPECT_DOUBLE_EQ(theta[0][0], 1.2);

  const auto before = theta;
  ascent_step(theta, theta.zeros_like(), kDefaultLearningRate);
  EXPECT_EQ(theta, before);
  EXPECT_EQ(kDefaultLearningRate, 0.0001);
}

TEST(AscentStepTest, LayoutMismatchRejected) {
  ParameterSet theta;
  theta.add("t", DenseArray::vector({1.0}));
  ParameterSet g;
  g.add("t", DenseArray::vector({1.0, 2.0}));
  EXPECT_THROW(ascent_step(theta, g, 0.1), InvalidInput);
}

TEST(RandomTest, DerivedStreamsDifferAndRepeat) {
  EXPECT_EQ(derive_seed(1, {2, 3}), derive_seed(1, {2, 3}));
  EXPECT_NE(derive_seed(1, {2, 3}), derive_seed(1, {3, 2}));
  EXPECT_NE(derive_seed(1, {2, 3}), derive_seed(2, {2, 3}));
}

}  // namespace
}  // namespace seqabs
