#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace lumen {

// Dense row-major tensor of doubles; the sole numeric carrier for both the
// ideal reference path and the photonic simulation path. Every public
// operation leaves only finite values behind.
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(std::vector<std::size_t> shape);
    Tensor(std::vector<std::size_t> shape, std::vector<double> data);

    static Tensor zeros(std::vector<std::size_t> shape) { return Tensor(std::move(shape)); }
    static Tensor vector(std::vector<double> v);
    static Tensor matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    const std::vector<std::size_t>& shape() const { return shape_; }
    std::size_t rank() const { return shape_.size(); }
    std::size_t size() const { return data_.size(); }
    std::size_t extent(std::size_t dim) const { return shape_.at(dim); }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::vector<double>& values() { return data_; }
    const std::vector<double>& values() const { return data_; }

    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    // 2-D accessors (row-major)
    double& at(std::size_t r, std::size_t c) { return data_[r * shape_[1] + c]; }
    double at(std::size_t r, std::size_t c) const { return data_[r * shape_[1] + c]; }

    bool all_finite() const;
    std::string shape_str() const;

    bool operator==(const Tensor& other) const = default;

private:
    std::vector<std::size_t> shape_;
    std::vector<double> data_;
};

enum class Padding { kValid, kSame };

Padding padding_from_string(const std::string& s);
std::string to_string(Padding p);

// Standard real matrix product, fixed row-major accumulation order.
Tensor matmul(const Tensor& a, const Tensor& b);

// Cross-correlation convention (no kernel flip). x is H x W x Cin,
// kernel is Kh x Kw x Cin x Cout; result H' x W' x Cout with
// H' = floor((H - Kh + 2p) / stride) + 1.
Tensor conv2d(const Tensor& x, const Tensor& kernel, std::size_t stride, Padding padding);

Tensor maxpool2d(const Tensor& x, std::size_t pool_h, std::size_t pool_w, std::size_t stride);

Tensor flatten(const Tensor& x);

// Numerically shifted by the max element; output sums to 1.
Tensor softmax(const Tensor& z);

// Ties break toward the lowest index.
std::size_t argmax(const Tensor& z);

}  // namespace lumen
