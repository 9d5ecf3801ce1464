#include "oilcast/tape.hpp"

#include <utility>

#include "oilcast/errors.hpp"

namespace oilcast {

namespace {

// Adds `contribution` (shaped like the op output) into `target`, collapsing
// rows when the operand was a broadcast 1 x cols bias row.
void accumulate(Array2& target, const Array2& contribution) {
    if (target.same_shape(contribution)) {
        for (std::size_t i = 0; i < target.size(); ++i)
            target.data[i] += contribution.data[i];
        return;
    }
    // target is 1 x cols, contribution is n x cols
    for (int r = 0; r < contribution.rows; ++r)
        for (int c = 0; c < contribution.cols; ++c)
            target.at(0, c) += contribution.at(r, c);
}

} // namespace

Var GradTape::push(Node node) {
    nodes_.push_back(std::move(node));
    return Var{static_cast<int>(nodes_.size()) - 1};
}

const GradTape::Node& GradTape::node(Var v) const {
    if (v.id < 0 || v.id >= static_cast<int>(nodes_.size()))
        throw ContractError("tape: variable does not belong to this recording");
    return nodes_[static_cast<std::size_t>(v.id)];
}

Var GradTape::leaf(Array2 value) {
    return push({Op::Leaf, -1, -1, 0.0, std::move(value), {}});
}

Var GradTape::param(const std::string& name, const Array2& value) {
    if (params_.count(name))
        throw ContractError("tape: parameter '" + name + "' registered twice");
    Var v = push({Op::Param, -1, -1, 0.0, value, name});
    params_[name] = v.id;
    return v;
}

Var GradTape::matmul(Var a, Var b) {
    return push({Op::MatMul, a.id, b.id, 0.0,
                 oilcast::matmul(node(a).value, node(b).value), {}});
}

Var GradTape::add(Var a, Var b) {
    return push({Op::Add, a.id, b.id, 0.0,
                 oilcast::add(node(a).value, node(b).value), {}});
}

Var GradTape::sub(Var a, Var b) {
    return push({Op::Sub, a.id, b.id, 0.0,
                 oilcast::sub(node(a).value, node(b).value), {}});
}

Var GradTape::mul(Var a, Var b) {
    return push({Op::Mul, a.id, b.id, 0.0,
                 oilcast::mul(node(a).value, node(b).value), {}});
}

Var GradTape::sigmoid(Var a) {
    return push({Op::Sigmoid, a.id, -1, 0.0, oilcast::sigmoid(node(a).value), {}});
}

Var GradTape::tanh(Var a) {
    return push({Op::Tanh, a.id, -1, 0.0, oilcast::tanh(node(a).value), {}});
}

Var GradTape::relu(Var a) {
    return push({Op::Relu, a.id, -1, 0.0, oilcast::relu(node(a).value), {}});
}

Var GradTape::concat_cols(Var a, Var b) {
    const Array2& av = node(a).value;
    const Array2& bv = node(b).value;
    if (av.rows != bv.rows)
        throw ShapeError("concat_cols: row counts disagree, " + av.shape_str() +
                         " vs " + bv.shape_str());
    Array2 out(av.rows, av.cols + bv.cols);
    for (int r = 0; r < av.rows; ++r) {
        for (int c = 0; c < av.cols; ++c) out.at(r, c) = av.at(r, c);
        for (int c = 0; c < bv.cols; ++c) out.at(r, av.cols + c) = bv.at(r, c);
    }
    return push({Op::ConcatCols, a.id, b.id, 0.0, std::move(out), {}});
}

Var GradTape::sum(Var a) {
    double acc = 0.0;
    for (double v : node(a).value.data) acc += v;
    Array2 out(1, 1);
    out.at(0, 0) = acc;
    return push({Op::Sum, a.id, -1, 0.0, std::move(out), {}});
}

Var GradTape::scale(Var a, double c) {
    return push({Op::Scale, a.id, -1, c, oilcast::scale(node(a).value, c), {}});
}

const Array2& GradTape::value(Var v) const { return node(v).value; }

double GradTape::scalar(Var v) const {
    const Array2& val = node(v).value;
    if (val.rows != 1 || val.cols != 1)
        throw ContractError("scalar: node is " + val.shape_str() + ", not 1x1");
    return val.at(0, 0);
}

void GradTape::reset() {
    nodes_.clear();
    params_.clear();
}

GradMap GradTape::backward(Var loss) {
    const Node& loss_node = node(loss);
    if (loss_node.value.rows != 1 || loss_node.value.cols != 1)
        throw ContractError("backward: loss must be a 1x1 scalar, got " +
                            loss_node.value.shape_str());

    std::vector<Array2> grads(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        grads[i] = Array2::zeros(nodes_[i].value.rows, nodes_[i].value.cols);
    grads[static_cast<std::size_t>(loss.id)].at(0, 0) = 1.0;

    for (int i = loss.id; i >= 0; --i) {
        const Node& n = nodes_[static_cast<std::size_t>(i)];
        const Array2& g = grads[static_cast<std::size_t>(i)];
        switch (n.op) {
        case Op::Leaf:
        case Op::Param:
            break;
        case Op::MatMul: {
            const Array2& av = nodes_[static_cast<std::size_t>(n.a)].value;
            const Array2& bv = nodes_[static_cast<std::size_t>(n.b)].value;
            accumulate(grads[static_cast<std::size_t>(n.a)], matmul_nt(g, bv));
            accumulate(grads[static_cast<std::size_t>(n.b)], matmul_tn(av, g));
            break;
        }
        case Op::Add:
            accumulate(grads[static_cast<std::size_t>(n.a)], g);
            accumulate(grads[static_cast<std::size_t>(n.b)], g);
            break;
        case Op::Sub:
            accumulate(grads[static_cast<std::size_t>(n.a)], g);
            accumulate(grads[static_cast<std::size_t>(n.b)], oilcast::scale(g, -1.0));
            break;
        case Op::Mul: {
            const Array2& av = nodes_[static_cast<std::size_t>(n.a)].value;
            const Array2& bv = nodes_[static_cast<std::size_t>(n.b)].value;
            accumulate(grads[static_cast<std::size_t>(n.a)], oilcast::mul(g, bv));
            accumulate(grads[static_cast<std::size_t>(n.b)], oilcast::mul(g, av));
            break;
        }
        case Op::Sigmoid: {
            Array2 d(n.value.rows, n.value.cols);
            for (std::size_t k = 0; k < d.size(); ++k) {
                const double s = n.value.data[k];
                d.data[k] = g.data[k] * s * (1.0 - s);
            }
            accumulate(grads[static_cast<std::size_t>(n.a)], d);
            break;
        }
        case Op::Tanh: {
            Array2 d(n.value.rows, n.value.cols);
            for (std::size_t k = 0; k < d.size(); ++k) {
                const double t = n.value.data[k];
                d.data[k] = g.data[k] * (1.0 - t * t);
            }
            accumulate(grads[static_cast<std::size_t>(n.a)], d);
            break;
        }
        case Op::Relu: {
            const Array2& av = nodes_[static_cast<std::size_t>(n.a)].value;
            Array2 d(n.value.rows, n.value.cols);
            for (std::size_t k = 0; k < d.size(); ++k)
                d.data[k] = av.data[k] > 0.0 ? g.data[k] : 0.0;
            accumulate(grads[static_cast<std::size_t>(n.a)], d);
            break;
        }
        case Op::ConcatCols: {
            Array2& ga = grads[static_cast<std::size_t>(n.a)];
            Array2& gb = grads[static_cast<std::size_t>(n.b)];
            for (int r = 0; r < n.value.rows; ++r) {
                for (int c = 0; c < ga.cols; ++c) ga.at(r, c) += g.at(r, c);
                for (int c = 0; c < gb.cols; ++c) gb.at(r, c) += g.at(r, ga.cols + c);
            }
            break;
        }
        case Op::Sum: {
            Array2& ga = grads[static_cast<std::size_t>(n.a)];
            const double gv = g.at(0, 0);
            for (double& x : ga.data) x += gv;
            break;
        }
        case Op::Scale:
            accumulate(grads[static_cast<std::size_t>(n.a)], oilcast::scale(g, n.c));
            break;
        }
    }

    GradMap out;
    for (const auto& [name, id] : params_)
        out.emplace(name, std::move(grads[static_cast<std::size_t>(id)]));
    reset();
    return out;
}

} // namespace oilcast
