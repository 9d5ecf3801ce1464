#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace oilcast {

/// Dense row-major matrix of doubles. All training arithmetic runs at
/// double precision; shapes are validated on every public operation.
struct Array2 {
    int rows = 0;
    int cols = 0;
    std::vector<double> data; // length rows * cols, row-major

    Array2() = default;
    Array2(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

    static Array2 zeros(int r, int c) { return Array2(r, c); }
    static Array2 full(int r, int c, double v);
    static Array2 identity(int n);
    static Array2 from_rows(const std::vector<std::vector<double>>& rows);

    double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }

    std::size_t size() const { return data.size(); }
    bool same_shape(const Array2& other) const {
        return rows == other.rows && cols == other.cols;
    }
    std::string shape_str() const;
    bool all_finite() const;
};

bool operator==(const Array2& a, const Array2& b);

Array2 matmul(const Array2& a, const Array2& b);

// Binary elementwise ops accept equal shapes, or a 1 x cols bias row on
// either side which broadcasts across rows. Anything else is a ShapeError.
Array2 add(const Array2& a, const Array2& b);
Array2 sub(const Array2& a, const Array2& b);
Array2 mul(const Array2& a, const Array2& b);

Array2 sigmoid(const Array2& a);
Array2 tanh(const Array2& a);
Array2 relu(const Array2& a);
Array2 scale(const Array2& a, double c);
Array2 transpose(const Array2& a);

// Internal fused products used by backpropagation: a * b^T and a^T * b.
Array2 matmul_nt(const Array2& a, const Array2& b);
Array2 matmul_tn(const Array2& a, const Array2& b);

} // namespace oilcast
