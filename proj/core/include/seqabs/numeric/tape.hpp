#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "seqabs/numeric/dense_array.hpp"
#include "seqabs/numeric/parameter_set.hpp"

namespace seqabs {

/// Reverse-mode gradient tape over the handful of vector operators the
/// policy network needs.
///
/// Nodes are appended in evaluation order, so the tape is already a
/// topological order and backward() is a single reverse sweep. Parameter
/// leaves read their values from the bound ParameterSet without copying it;
/// the set must outlive the tape and stay unmodified while the tape is alive.
///
/// A tape is single-use: backward() may be called once.
class Tape {
 public:
  struct Var {
    std::uint32_t id = 0;
  };

  explicit Tape(const ParameterSet& params);

  Var parameter(std::size_t index);
  Var constant(DenseArray value);

  /// x[D] . W[D x M] -> [M]
  Var matvec(Var x, Var w);
  Var add(Var a, Var b);
  Var mul(Var a, Var b);
  Var sigmoid(Var a);
  Var tanh(Var a);
  /// 1 - a
  Var one_minus(Var a);
  Var concat(std::span<const Var> parts);
  /// Row r of a matrix as a vector.
  Var row(Var table, std::size_t r);
  /// log softmax(logits)[index] as a 1-element array.
  Var log_softmax_pick(Var logits, std::size_t index);

  const DenseArray& value(Var v) const;
  std::size_t node_count() const noexcept { return nodes_.size(); }

  /// Gradient of a scalar node with respect to every bound parameter.
  /// Throws UsageError if the node is not scalar or the tape was consumed.
  ParameterSet backward(Var output);

  /// Recomputes every node from the recorded operations and returns the
  /// value of `output`.
  DenseArray replay(Var output) const;

 private:
  enum class Op : std::uint8_t {
    Parameter,
    Constant,
    MatVec,
    Add,
    Mul,
    Sigmoid,
    Tanh,
    OneMinus,
    Concat,
    Row,
    LogSoftmaxPick,
  };

  struct Node {
    explicit Node(Op o, std::uint32_t x = 0, std::uint32_t y = 0) : op(o), a(x), b(y) {}

    Op op;
    std::uint32_t a = 0;
    std::uint32_t b = 0;
    std::size_t aux = 0;
    std::vector<std::uint32_t> parts;
    DenseArray value;
  };

  Var push(Node node);
  void check(Var v) const;
  DenseArray compute(const Node& node, const std::vector<Node>& nodes) const;
  const DenseArray& value_in(const std::vector<Node>& nodes, std::uint32_t id) const;

  const ParameterSet* params_;
  std::vector<Node> nodes_;
  std::vector<std::int64_t> param_nodes_;
  bool consumed_ = false;
};

}  // namespace seqabs
