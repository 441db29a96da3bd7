#include "seqabs/numeric/tape.hpp"

#include <cmath>
#include <string>

#include "seqabs/error.hpp"
#include "seqabs/numeric/layers.hpp"

namespace seqabs {

Tape::Tape(const ParameterSet& params) : params_(&params), param_nodes_(params.size(), -1) {}

void Tape::check(Var v) const {
  if (v.id >= nodes_.size()) throw UsageError("tape variable does not belong to this tape");
}

const DenseArray& Tape::value_in(const std::vector<Node>& nodes, std::uint32_t id) const {
  const Node& n = nodes[id];
  if (n.op == Op::Parameter) return (*params_)[n.aux];
  return n.value;
}

const DenseArray& Tape::value(Var v) const {
  check(v);
  return value_in(nodes_, v.id);
}

Tape::Var Tape::push(Node node) {
  if (node.op != Op::Parameter && node.op != Op::Constant) node.value = compute(node, nodes_);
  nodes_.push_back(std::move(node));
  return Var{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Tape::Var Tape::parameter(std::size_t index) {
  if (index >= params_->size()) throw InvalidInput("parameter index out of range");
  if (param_nodes_[index] >= 0) return Var{static_cast<std::uint32_t>(param_nodes_[index])};
  Node n{Op::Parameter};
  n.aux = index;
  const Var v = push(std::move(n));
  param_nodes_[index] = v.id;
  return v;
}

Tape::Var Tape::constant(DenseArray value) {
  Node n{Op::Constant};
  n.value = std::move(value);
  return push(std::move(n));
}

Tape::Var Tape::matvec(Var x, Var w) {
  check(x);
  check(w);
  const auto& wv = value(w);
  if (wv.rank() != 2 || wv.rows() != value(x).size()) {
    throw InvalidInput("matvec: input length " + std::to_string(value(x).size()) +
                       " does not match weight rows");
  }
  return push(Node{Op::MatVec, x.id, w.id});
}

Tape::Var Tape::add(Var a, Var b) {
  check(a);
  check(b);
  if (value(a).size() != value(b).size()) throw InvalidInput("add: length mismatch");
  return push(Node{Op::Add, a.id, b.id});
}

Tape::Var Tape::mul(Var a, Var b) {
  check(a);
  check(b);
  if (value(a).size() != value(b).size()) throw InvalidInput("mul: length mismatch");
  return push(Node{Op::Mul, a.id, b.id});
}

Tape::Var Tape::sigmoid(Var a) {
  check(a);
  return push(Node{Op::Sigmoid, a.id});
}

Tape::Var Tape::tanh(Var a) {
  check(a);
  return push(Node{Op::Tanh, a.id});
}

Tape::Var Tape::one_minus(Var a) {
  check(a);
  return push(Node{Op::OneMinus, a.id});
}

Tape::Var Tape::concat(std::span<const Var> parts) {
  if (parts.empty()) throw InvalidInput("concat: no inputs");
  Node n{Op::Concat};
  for (const Var p : parts) {
    check(p);
    n.parts.push_back(p.id);
  }
  return push(std::move(n));
}

Tape::Var Tape::row(Var table, std::size_t r) {
  check(table);
  const auto& t = value(table);
  if (t.rank() != 2 || r >= t.rows()) throw InvalidInput("row: index out of range");
  Node n{Op::Row, table.id};
  n.aux = r;
  return push(std::move(n));
}

Tape::Var Tape::log_softmax_pick(Var logits, std::size_t index) {
  check(logits);
  if (index >= value(logits).size()) throw InvalidInput("log_softmax_pick: index out of range");
  Node n{Op::LogSoftmaxPick, logits.id};
  n.aux = index;
  return push(std::move(n));
}

DenseArray Tape::compute(const Node& node, const std::vector<Node>& nodes) const {
  switch (node.op) {
    case Op::Parameter:
      return (*params_)[node.aux];
    case Op::Constant:
      return node.value;
    case Op::MatVec: {
      const auto& x = value_in(nodes, node.a);
      const auto& w = value_in(nodes, node.b);
      const std::size_t cols = w.cols();
      DenseArray y({cols});
      const auto wv = w.values();
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double xi = x[i];
        if (xi == 0.0) continue;
        const double* wr = wv.data() + i * cols;
        for (std::size_t j = 0; j < cols; ++j) y[j] += xi * wr[j];
      }
      return y;
    }
    case Op::Add: {
      DenseArray y = value_in(nodes, node.a);
      const auto& b = value_in(nodes, node.b);
      for (std::size_t i = 0; i < y.size(); ++i) y[i] += b[i];
      return y;
    }
    case Op::Mul: {
      DenseArray y = value_in(nodes, node.a);
      const auto& b = value_in(nodes, node.b);
      for (std::size_t i = 0; i < y.size(); ++i) y[i] *= b[i];
      return y;
    }
    case Op::Sigmoid: {
      DenseArray y = value_in(nodes, node.a);
      for (double& v : y.values()) v = seqabs::sigmoid(v);
      return y;
    }
    case Op::Tanh: {
      DenseArray y = value_in(nodes, node.a);
      for (double& v : y.values()) v = std::tanh(v);
      return y;
    }
    case Op::OneMinus: {
      DenseArray y = value_in(nodes, node.a);
      for (double& v : y.values()) v = 1.0 - v;
      return y;
    }
    case Op::Concat: {
      std::size_t total = 0;
      for (auto id : node.parts) total += value_in(nodes, id).size();
      DenseArray y({total});
      std::size_t offset = 0;
      for (auto id : node.parts) {
        for (double v : value_in(nodes, id).values()) y[offset++] = v;
      }
      return y;
    }
    case Op::Row: {
      const auto& t = value_in(nodes, node.a);
      DenseArray y({t.cols()});
      for (std::size_t j = 0; j < t.cols(); ++j) y[j] = t.at(node.aux, j);
      return y;
    }
    case Op::LogSoftmaxPick: {
      const auto ls = log_softmax(value_in(nodes, node.a).values());
      DenseArray y({1});
      y[0] = ls[node.aux];
      return y;
    }
  }
  throw UsageError("tape: unknown operation");
}

ParameterSet Tape::backward(Var output) {
  check(output);
  if (consumed_) throw UsageError("tape already consumed by backward()");
  if (value(output).size() != 1) throw UsageError("backward() requires a scalar output node");
  consumed_ = true;

  ParameterSet grads = params_->zeros_like();
  std::vector<DenseArray> adj(output.id + 1);
  adj[output.id] = DenseArray({1}, {1.0});

  auto seed = [&](std::uint32_t id) -> DenseArray& {
    if (adj[id].empty()) adj[id] = DenseArray::zeros(value_in(nodes_, id).shape());
    return adj[id];
  };

  for (std::int64_t k = output.id; k >= 0; --k) {
    const auto id = static_cast<std::uint32_t>(k);
    if (adj[id].empty()) continue;
    const DenseArray& dy = adj[id];
    const Node& n = nodes_[id];
    switch (n.op) {
      case Op::Parameter: {
        auto dst = grads[n.aux].values();
        const auto src = dy.values();
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
        break;
      }
      case Op::Constant:
        break;
      case Op::MatVec: {
        const auto& x = value_in(nodes_, n.a);
        const auto& w = value_in(nodes_, n.b);
        const std::size_t cols = w.cols();
        DenseArray& dx = seed(n.a);
        DenseArray& dw = seed(n.b);
        for (std::size_t i = 0; i < x.size(); ++i) {
          double acc = 0.0;
          const double xi = x[i];
          for (std::size_t j = 0; j < cols; ++j) {
            acc += w.at(i, j) * dy[j];
            dw.at(i, j) += xi * dy[j];
          }
          dx[i] += acc;
        }
        break;
      }
      case Op::Add: {
        DenseArray& da = seed(n.a);
        for (std::size_t i = 0; i < dy.size(); ++i) da[i] += dy[i];
        DenseArray& db = seed(n.b);
        for (std::size_t i = 0; i < dy.size(); ++i) db[i] += dy[i];
        break;
      }
      case Op::Mul: {
        const auto& a = value_in(nodes_, n.a);
        const auto& b = value_in(nodes_, n.b);
        DenseArray& da = seed(n.a);
        for (std::size_t i = 0; i < dy.size(); ++i) da[i] += b[i] * dy[i];
        DenseArray& db = seed(n.b);
        for (std::size_t i = 0; i < dy.size(); ++i) db[i] += a[i] * dy[i];
        break;
      }
      case Op::Sigmoid: {
        const auto& y = n.value;
        DenseArray& da = seed(n.a);
        for (std::size_t i = 0; i < dy.size(); ++i) da[i] += y[i] * (1.0 - y[i]) * dy[i];
        break;
      }
      case Op::Tanh: {
        const auto& y = n.value;
        DenseArray& da = seed(n.a);
        for (std::size_t i = 0; i < dy.size(); ++i) da[i] += (1.0 - y[i] * y[i]) * dy[i];
        break;
      }
      case Op::OneMinus: {
        DenseArray& da = seed(n.a);
        for (std::size_t i = 0; i < dy.size(); ++i) da[i] -= dy[i];
        break;
      }
      case Op::Concat: {
        std::size_t offset = 0;
        for (auto part : n.parts) {
          DenseArray& dp = seed(part);
          for (std::size_t i = 0; i < dp.size(); ++i) dp[i] += dy[offset + i];
          offset += dp.size();
        }
        break;
      }
      case Op::Row: {
        DenseArray& dt = seed(n.a);
        const std::size_t cols = dt.cols();
        for (std::size_t j = 0; j < cols; ++j) dt.at(n.aux, j) += dy[j];
        break;
      }
      case Op::LogSoftmaxPick: {
        const auto p = softmax(value_in(nodes_, n.a).values());
        DenseArray& dl = seed(n.a);
        for (std::size_t j = 0; j < p.size(); ++j) {
          dl[j] += dy[0] * ((j == n.aux ? 1.0 : 0.0) - p[j]);
        }
        break;
      }
    }
    // Intermediate adjoints are no longer needed once propagated.
    if (n.op != Op::Parameter) adj[id] = DenseArray();
  }
  return grads;
}

DenseArray Tape::replay(Var output) const {
  check(output);
  std::vector<Node> fresh;
  fresh.reserve(output.id + 1);
  for (std::uint32_t id = 0; id <= output.id; ++id) {
    Node n = nodes_[id];
    if (n.op != Op::Parameter && n.op != Op::Constant) n.value = compute(n, fresh);
    fresh.push_back(std::move(n));
  }
  return value_in(fresh, output.id);
}

}  // namespace seqabs
