#pragma once

#include <map>
#include <string>
#include <vector>

#include "oilcast/array.hpp"

namespace oilcast {

/// Handle to a node on a GradTape. Valid only for the tape that issued it,
/// and only until that tape's backward() consumes the recording.
struct Var {
    int id = -1;
};

using GradMap = std::map<std::string, Array2>;

/// Reverse-mode tape over Array2 operations.
///
/// Every operation appends one node recording its operands, output, and a
/// local gradient rule. Nodes only ever reference earlier nodes, so walking
/// the record backwards is a reverse topological sweep; a value consumed k
/// times accumulates the sum of its k gradient contributions.
///
/// A tape and the arrays it references form one isolated computation
/// context: it may move between threads but must never be shared.
class GradTape {
public:
    /// Constant input; receives no gradient entry of its own.
    Var leaf(Array2 value);

    /// Named trainable parameter. Names must be unique per recording.
    Var param(const std::string& name, const Array2& value);

    Var matmul(Var a, Var b);
    Var add(Var a, Var b);
    Var sub(Var a, Var b);
    Var mul(Var a, Var b);
    Var sigmoid(Var a);
    Var tanh(Var a);
    Var relu(Var a);
    Var concat_cols(Var a, Var b);
    Var sum(Var a);
    Var scale(Var a, double c);

    const Array2& value(Var v) const;
    double scalar(Var v) const;

    /// Propagates d(loss)/d(node) through the recording and returns
    /// d(loss)/d(theta) for every registered parameter. The loss must be
    /// 1x1. The recording is consumed: the tape is reset afterwards.
    GradMap backward(Var loss);

    std::size_t size() const { return nodes_.size(); }
    void reset();

private:
    enum class Op {
        Leaf,
        Param,
        MatMul,
        Add,
        Sub,
        Mul,
        Sigmoid,
        Tanh,
        Relu,
        ConcatCols,
        Sum,
        Scale,
    };

    struct Node {
        Op op;
        int a = -1;
        int b = -1;
        double c = 0.0;
        Array2 value;
        std::string name; // parameters only
    };

    Var push(Node node);
    const Node& node(Var v) const;

    std::vector<Node> nodes_;
    std::map<std::string, int> params_;
};

} // namespace oilcast
