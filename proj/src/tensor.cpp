#include "lumen/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lumen/error.hpp"

namespace lumen {

namespace {

std::size_t shape_product(const std::vector<std::size_t>& shape) {
    std::size_t n = 1;
    for (std::size_t e : shape) {
        if (e == 0) throw NumericError("tensor extent must be positive");
        n *= e;
    }
    return n;
}

void check_finite(const Tensor& t, const char* op) {
    if (!t.all_finite()) {
        throw NumericError(std::string(op) + ": non-finite value in result");
    }
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> shape)
    : shape_(std::move(shape)), data_(shape_product(shape_), 0.0) {}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
    if (shape_product(shape_) != data_.size()) {
        throw NumericError("tensor data length " + std::to_string(data_.size()) +
                           " does not match shape " + shape_str());
    }
}

Tensor Tensor::vector(std::vector<double> v) {
    std::size_t n = v.size();
    return Tensor({n}, std::move(v));
}

Tensor Tensor::matrix(std::size_t rows, std::size_t cols, std::vector<double> data) {
    return Tensor({rows, cols}, std::move(data));
}

bool Tensor::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

std::string Tensor::shape_str() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < shape_.size(); ++i) {
        if (i) os << "x";
        os << shape_[i];
    }
    os << "]";
    return os.str();
}

Padding padding_from_string(const std::string& s) {
    if (s == "valid") return Padding::kValid;
    if (s == "same") return Padding::kSame;
    throw ConfigError("unknown padding '" + s + "' (expected 'valid' or 'same')");
}

std::string to_string(Padding p) {
    return p == Padding::kValid ? "valid" : "same";
}

Tensor matmul(const Tensor& a, const Tensor& b) {
    if (a.rank() != 2 || b.rank() != 2) {
        throw NumericError("matmul: expected rank-2 operands, got " + a.shape_str() + " and " +
                           b.shape_str());
    }
    const std::size_t m = a.extent(0), k = a.extent(1);
    const std::size_t k2 = b.extent(0), n = b.extent(1);
    if (k != k2) {
        throw NumericError("matmul: inner extents differ, " + a.shape_str() + " vs " +
                           b.shape_str());
    }
    Tensor out({m, n});
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t p = 0; p < k; ++p) {
                acc += a.at(i, p) * b.at(p, j);
            }
            out.at(i, j) = acc;
        }
    }
    check_finite(out, "matmul");
    return out;
}

Tensor conv2d(const Tensor& x, const Tensor& kernel, std::size_t stride, Padding padding) {
    if (x.rank() != 3) {
        throw NumericError("conv2d: input must be HxWxC, got " + x.shape_str());
    }
    if (kernel.rank() != 4) {
        throw NumericError("conv2d: kernel must be KhxKwxCinxCout, got " + kernel.shape_str());
    }
    if (stride < 1) throw NumericError("conv2d: stride must be >= 1");

    const std::size_t h = x.extent(0), w = x.extent(1), cin = x.extent(2);
    const std::size_t kh = kernel.extent(0), kw = kernel.extent(1);
    if (kernel.extent(2) != cin) {
        throw NumericError("conv2d: kernel Cin " + std::to_string(kernel.extent(2)) +
                           " does not match input channels " + std::to_string(cin));
    }
    const std::size_t cout = kernel.extent(3);

    std::size_t pad_top = 0, pad_left = 0, out_h = 0, out_w = 0;
    if (padding == Padding::kValid) {
        if (kh > h || kw > w) {
            throw NumericError("conv2d: kernel " + kernel.shape_str() +
                               " larger than input " + x.shape_str());
        }
        out_h = (h - kh) / stride + 1;
        out_w = (w - kw) / stride + 1;
    } else {
        out_h = (h + stride - 1) / stride;
        out_w = (w + stride - 1) / stride;
        const std::size_t need_h = (out_h - 1) * stride + kh;
        const std::size_t need_w = (out_w - 1) * stride + kw;
        pad_top = need_h > h ? (need_h - h) / 2 : 0;
        pad_left = need_w > w ? (need_w - w) / 2 : 0;
    }

    Tensor out({out_h, out_w, cout});
    for (std::size_t oy = 0; oy < out_h; ++oy) {
        for (std::size_t ox = 0; ox < out_w; ++ox) {
            for (std::size_t oc = 0; oc < cout; ++oc) {
                double acc = 0.0;
                for (std::size_t ky = 0; ky < kh; ++ky) {
                    const std::ptrdiff_t iy =
                        static_cast<std::ptrdiff_t>(oy * stride + ky) -
                        static_cast<std::ptrdiff_t>(pad_top);
                    if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(h)) continue;
                    for (std::size_t kx = 0; kx < kw; ++kx) {
                        const std::ptrdiff_t ix =
                            static_cast<std::ptrdiff_t>(ox * stride + kx) -
                            static_cast<std::ptrdiff_t>(pad_left);
                        if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(w)) continue;
                        for (std::size_t ic = 0; ic < cin; ++ic) {
                            const double xv = x[(static_cast<std::size_t>(iy) * w +
                                                 static_cast<std::size_t>(ix)) * cin + ic];
                            const double kv = kernel[((ky * kw + kx) * cin + ic) * cout + oc];
                            acc += xv * kv;
                        }
                    }
                }
                out[(oy * out_w + ox) * cout + oc] = acc;
            }
        }
    }
    check_finite(out, "conv2d");
    return out;
}

Tensor maxpool2d(const Tensor& x, std::size_t pool_h, std::size_t pool_w, std::size_t stride) {
    if (x.rank() != 3) {
        throw NumericError("maxpool2d: input must be HxWxC, got " + x.shape_str());
    }
    if (pool_h == 0 || pool_w == 0 || stride == 0) {
        throw NumericError("maxpool2d: window and stride must be positive");
    }
    const std::size_t h = x.extent(0), w = x.extent(1), c = x.extent(2);
    if (pool_h > h || pool_w > w) {
        throw NumericError("maxpool2d: window larger than input " + x.shape_str());
    }
    const std::size_t out_h = (h - pool_h) / stride + 1;
    const std::size_t out_w = (w - pool_w) / stride + 1;

    Tensor out({out_h, out_w, c});
    for (std::size_t oy = 0; oy < out_h; ++oy) {
        for (std::size_t ox = 0; ox < out_w; ++ox) {
            for (std::size_t ic = 0; ic < c; ++ic) {
                double best = -std::numeric_limits<double>::infinity();
                for (std::size_t py = 0; py < pool_h; ++py) {
                    for (std::size_t px = 0; px < pool_w; ++px) {
                        best = std::max(best,
                                        x[((oy * stride + py) * w + (ox * stride + px)) * c + ic]);
                    }
                }
                out[(oy * out_w + ox) * c + ic] = best;
            }
        }
    }
    check_finite(out, "maxpool2d");
    return out;
}

Tensor flatten(const Tensor& x) {
    return Tensor({x.size()}, x.values());
}

Tensor softmax(const Tensor& z) {
    if (z.rank() != 1 || z.size() == 0) {
        throw NumericError("softmax: expected nonempty rank-1 tensor, got " + z.shape_str());
    }
    double zmax = z[0];
    for (std::size_t i = 1; i < z.size(); ++i) zmax = std::max(zmax, z[i]);
    Tensor out({z.size()});
    double sum = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        out[i] = std::exp(z[i] - zmax);
        sum += out[i];
    }
    for (std::size_t i = 0; i < z.size(); ++i) out[i] /= sum;
    check_finite(out, "softmax");
    return out;
}

std::size_t argmax(const Tensor& z) {
    if (z.rank() != 1 || z.size() == 0) {
        throw NumericError("argmax: expected nonempty rank-1 tensor, got " + z.shape_str());
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < z.size(); ++i) {
        if (z[i] > z[best]) best = i;
    }
    return best;
}

}  // namespace lumen
