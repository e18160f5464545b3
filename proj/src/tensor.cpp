#include "sigtext/tensor.hpp"

#include "sigtext/error.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <string>

namespace sigtext {

namespace {

std::size_t product(const std::vector<std::size_t>& dims)
{
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

void check_dims(const std::vector<std::size_t>& dims)
{
    if (dims.empty() || dims.size() > 4) {
        throw InvalidArgument("tensor order must be between 1 and 4");
    }
    for (std::size_t d : dims) {
        if (d == 0) {
            throw InvalidArgument("tensor dimensions must be positive");
        }
    }
}

std::vector<std::size_t> strides_of(const std::vector<std::size_t>& dims)
{
    std::vector<std::size_t> s(dims.size(), 1);
    for (std::size_t m = dims.size(); m-- > 1;) {
        s[m - 1] = s[m] * dims[m];
    }
    return s;
}

} // namespace

Tensor::Tensor(std::vector<std::size_t> dims) : dims_(std::move(dims))
{
    check_dims(dims_);
    values_.assign(product(dims_), 0.0);
}

Tensor::Tensor(std::vector<std::size_t> dims, std::vector<double> values)
    : dims_(std::move(dims)), values_(std::move(values))
{
    check_dims(dims_);
    if (values_.size() != product(dims_)) {
        throw DimensionMismatch("tensor holds " + std::to_string(values_.size()) + " values, dims need " +
                                std::to_string(product(dims_)));
    }
}

Tensor Tensor::matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
{
    return Tensor({rows, cols}, std::move(values));
}

Tensor Tensor::identity(std::size_t n)
{
    Tensor t({n, n});
    for (std::size_t i = 0; i < n; ++i) {
        t(i, i) = 1.0;
    }
    return t;
}

std::size_t Tensor::offset(std::span<const std::size_t> index) const
{
    if (index.size() != dims_.size()) {
        throw DimensionMismatch("index has " + std::to_string(index.size()) + " entries for an order-" +
                                std::to_string(dims_.size()) + " tensor");
    }
    std::size_t off = 0;
    for (std::size_t m = 0; m < dims_.size(); ++m) {
        if (index[m] >= dims_[m]) {
            throw InvalidArgument("index out of range in mode " + std::to_string(m + 1));
        }
        off = off * dims_[m] + index[m];
    }
    return off;
}

double& Tensor::at(std::initializer_list<std::size_t> index)
{
    return values_[offset(std::span<const std::size_t>(index.begin(), index.size()))];
}

double Tensor::at(std::initializer_list<std::size_t> index) const
{
    return values_[offset(std::span<const std::size_t>(index.begin(), index.size()))];
}

double Tensor::frobenius_norm() const noexcept
{
    double s = 0.0;
    for (double v : values_) {
        s += v * v;
    }
    return std::sqrt(s);
}

void Tensor::require_finite() const
{
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw InvalidArgument("tensor contains a non-finite value");
        }
    }
}

Tensor flexible_product(const Tensor& a, const Tensor& b, unsigned q, FlexOrder alpha, FlexOrder beta)
{
    const std::size_t m = a.order();
    const std::size_t n = b.order();
    if (m == 0 || n == 0) {
        throw InvalidArgument("flexible product of an empty tensor");
    }
    if (q < 1 || q + 1 > std::min(m, n)) {
        throw InvalidArgument("contraction order q=" + std::to_string(q) + " needs 1 <= q <= min(order) - 1");
    }

    // Mode of A / B carrying contraction index s_r (r = 0..q-1).
    std::vector<std::size_t> a_contract(q);
    std::vector<std::size_t> b_contract(q);
    for (std::size_t r = 0; r < q; ++r) {
        a_contract[r] = alpha == FlexOrder::Forward ? r + 1 : m - 1 - r;
        b_contract[r] = beta == FlexOrder::Forward ? r : n - 2 - r;
    }
    for (std::size_t r = 0; r < q; ++r) {
        if (a.dim(a_contract[r]) != b.dim(b_contract[r])) {
            throw DimensionMismatch("contracted modes differ: A mode " + std::to_string(a_contract[r] + 1) + " has " +
                                    std::to_string(a.dim(a_contract[r])) + ", B mode " +
                                    std::to_string(b_contract[r] + 1) + " has " +
                                    std::to_string(b.dim(b_contract[r])));
        }
    }

    std::vector<bool> a_is_contracted(m, false);
    std::vector<bool> b_is_contracted(n, false);
    for (std::size_t r = 0; r < q; ++r) {
        a_is_contracted[a_contract[r]] = true;
        b_is_contracted[b_contract[r]] = true;
    }

    const auto a_strides = strides_of(a.dims());
    const auto b_strides = strides_of(b.dims());

    // Output modes: free modes of A in order, then free modes of B in order.
    std::vector<std::size_t> out_dims;
    std::vector<std::size_t> out_a_stride;
    std::vector<std::size_t> out_b_stride;
    for (std::size_t k = 0; k < m; ++k) {
        if (!a_is_contracted[k]) {
            out_dims.push_back(a.dim(k));
            out_a_stride.push_back(a_strides[k]);
            out_b_stride.push_back(0);
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        if (!b_is_contracted[k]) {
            out_dims.push_back(b.dim(k));
            out_a_stride.push_back(0);
            out_b_stride.push_back(b_strides[k]);
        }
    }

    std::vector<std::size_t> s_dims(q);
    std::vector<std::size_t> s_a_stride(q);
    std::vector<std::size_t> s_b_stride(q);
    for (std::size_t r = 0; r < q; ++r) {
        s_dims[r] = a.dim(a_contract[r]);
        s_a_stride[r] = a_strides[a_contract[r]];
        s_b_stride[r] = b_strides[b_contract[r]];
    }
    std::size_t s_total = 1;
    for (std::size_t d : s_dims) {
        s_total *= d;
    }

    Tensor out(out_dims);
    const auto av = a.values();
    const auto bv = b.values();
    auto ov = out.values();

    std::vector<std::size_t> oi(out_dims.size(), 0);
    std::vector<std::size_t> si(q, 0);
    for (std::size_t o = 0; o < ov.size(); ++o) {
        std::size_t a_base = 0;
        std::size_t b_base = 0;
        for (std::size_t k = 0; k < oi.size(); ++k) {
            a_base += oi[k] * out_a_stride[k];
            b_base += oi[k] * out_b_stride[k];
        }
        // Sum over (s_1, ..., s_q) with s_q varying fastest.
        std::fill(si.begin(), si.end(), 0);
        std::size_t a_off = a_base;
        std::size_t b_off = b_base;
        double acc = 0.0;
        for (std::size_t s = 0; s < s_total; ++s) {
            acc += av[a_off] * bv[b_off];
            for (std::size_t r = q; r-- > 0;) {
                if (++si[r] < s_dims[r]) {
                    a_off += s_a_stride[r];
                    b_off += s_b_stride[r];
                    break;
                }
                a_off -= (s_dims[r] - 1) * s_a_stride[r];
                b_off -= (s_dims[r] - 1) * s_b_stride[r];
                si[r] = 0;
            }
        }
        ov[o] = acc;
        for (std::size_t k = oi.size(); k-- > 0;) {
            if (++oi[k] < out_dims[k]) {
                break;
            }
            oi[k] = 0;
        }
    }
    return out;
}

Tensor transpose(const Tensor& a)
{
    const std::size_t m = a.order();
    std::vector<std::size_t> dims(a.dims().rbegin(), a.dims().rend());
    Tensor out(dims);
    const auto out_strides = strides_of(dims);
    std::vector<std::size_t> idx(m, 0);
    const auto av = a.values();
    auto ov = out.values();
    for (std::size_t lin = 0; lin < av.size(); ++lin) {
        std::size_t off = 0;
        for (std::size_t k = 0; k < m; ++k) {
            off += idx[k] * out_strides[m - 1 - k];
        }
        ov[off] = av[lin];
        for (std::size_t k = m; k-- > 0;) {
            if (++idx[k] < a.dim(k)) {
                break;
            }
            idx[k] = 0;
        }
    }
    return out;
}

double relative_difference(const Tensor& a, const Tensor& b)
{
    if (a.dims() != b.dims()) {
        throw DimensionMismatch("tensor shapes differ");
    }
    double diff = 0.0;
    double ref = 0.0;
    const auto av = a.values();
    const auto bv = b.values();
    for (std::size_t i = 0; i < av.size(); ++i) {
        diff += (av[i] - bv[i]) * (av[i] - bv[i]);
        ref += av[i] * av[i];
    }
    if (ref == 0.0) {
        return std::sqrt(diff);
    }
    return std::sqrt(diff / ref);
}

} // namespace sigtext
