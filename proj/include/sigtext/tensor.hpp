#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace sigtext {

// Dense real tensor of order 1..4 stored row-major (last index fastest).
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(std::vector<std::size_t> dims);
    Tensor(std::vector<std::size_t> dims, std::vector<double> values);

    static Tensor matrix(std::size_t rows, std::size_t cols, std::vector<double> values);
    static Tensor identity(std::size_t n);

    std::size_t order() const noexcept { return dims_.size(); }
    const std::vector<std::size_t>& dims() const noexcept { return dims_; }
    std::size_t dim(std::size_t mode) const { return dims_.at(mode); }
    std::size_t size() const noexcept { return values_.size(); }

    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

    std::size_t offset(std::span<const std::size_t> index) const;

    double& at(std::initializer_list<std::size_t> index);
    double at(std::initializer_list<std::size_t> index) const;

    // Unchecked accessors for the common matrix / third-order cases.
    double& operator()(std::size_t i, std::size_t j) { return values_[i * dims_[1] + j]; }
    double operator()(std::size_t i, std::size_t j) const { return values_[i * dims_[1] + j]; }
    double& operator()(std::size_t i, std::size_t j, std::size_t k)
    {
        return values_[(i * dims_[1] + j) * dims_[2] + k];
    }
    double operator()(std::size_t i, std::size_t j, std::size_t k) const
    {
        return values_[(i * dims_[1] + j) * dims_[2] + k];
    }

    double frobenius_norm() const noexcept;

    // Throws InvalidArgument on a non-finite entry.
    void require_finite() const;

private:
    std::vector<std::size_t> dims_;
    std::vector<double> values_;
};

using Tensor3 = Tensor;

// Order flag of a flexible product: which modes are contracted and in which order.
//   A, Forward: modes 2..q+1 contracted with s_1..s_q.
//   A, Reverse: the last q modes contracted, s_1 with the last mode.
//   B, Forward: modes 1..q contracted with s_1..s_q.
//   B, Reverse: the q modes before the last, s_1 with mode n-1; the last mode stays free.
// Free indices of A come first in the result, then the free indices of B.
enum class FlexOrder { Forward = 1, Reverse = 2 };

Tensor flexible_product(const Tensor& a, const Tensor& b, unsigned q, FlexOrder alpha, FlexOrder beta);

// Mode reversal: result(i_n, ..., i_1) = a(i_1, ..., i_n). For matrices this is the usual transpose.
Tensor transpose(const Tensor& a);

double relative_difference(const Tensor& a, const Tensor& b);

} // namespace sigtext
