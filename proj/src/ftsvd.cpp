#include "sigtext/ftsvd.hpp"

#include "sigtext/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>

namespace sigtext {

namespace {

void require_third_order(const Tensor3& a)
{
    if (a.order() != 3) {
        throw DimensionMismatch("FTSVD needs a third-order tensor");
    }
    a.require_finite();
}

Eigen::MatrixXd to_eigen(const Tensor& m)
{
    Eigen::MatrixXd out(m.dim(0), m.dim(1));
    for (std::size_t i = 0; i < m.dim(0); ++i) {
        for (std::size_t j = 0; j < m.dim(1); ++j) {
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
        }
    }
    return out;
}

Tensor from_eigen(const Eigen::MatrixXd& m)
{
    Tensor out({static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())});
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = m(i, j);
        }
    }
    return out;
}

// Eigenvectors of a symmetric matrix, columns ordered by descending eigenvalue.
std::pair<Eigen::MatrixXd, Eigen::VectorXd> sorted_eig(const Tensor& gram)
{
    const Eigen::MatrixXd g = to_eigen(gram);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g);
    if (solver.info() != Eigen::Success) {
        throw InvalidArgument("symmetric eigendecomposition did not converge");
    }
    const Eigen::Index n = g.rows();
    Eigen::MatrixXd vecs(n, n);
    Eigen::VectorXd vals(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        vecs.col(k) = solver.eigenvectors().col(n - 1 - k);
        vals(k) = std::max(0.0, solver.eigenvalues()(n - 1 - k));
    }
    return {vecs, vals};
}

} // namespace

Tensor frontal_slice(const Tensor3& a, std::size_t k)
{
    if (a.order() != 3 || k >= a.dim(2)) {
        throw InvalidArgument("frontal slice index out of range");
    }
    Tensor out({a.dim(0), a.dim(1)});
    for (std::size_t i = 0; i < a.dim(0); ++i) {
        for (std::size_t j = 0; j < a.dim(1); ++j) {
            out(i, j) = a(i, j, k);
        }
    }
    return out;
}

FTSVDResult ftsvd_first(const Tensor3& a)
{
    require_third_order(a);
    const Tensor at = transpose(a);
    const Tensor gram_u = flexible_product(a, at, 2, FlexOrder::Reverse, FlexOrder::Forward);
    const Tensor gram_v = flexible_product(at, a, 2, FlexOrder::Reverse, FlexOrder::Forward);
    const auto [u, lambda] = sorted_eig(gram_u);
    const auto [v, unused] = sorted_eig(gram_v);

    FTSVDResult r;
    r.kind = FtsvdKind::FirstKind;
    r.U = from_eigen(u);
    r.V = from_eigen(v);
    const Tensor left = flexible_product(transpose(r.U), a, 1, FlexOrder::Forward, FlexOrder::Forward);
    r.S = flexible_product(left, r.V, 1, FlexOrder::Reverse, FlexOrder::Forward);
    r.singular_values.resize(static_cast<std::size_t>(lambda.size()));
    for (Eigen::Index k = 0; k < lambda.size(); ++k) {
        r.singular_values[static_cast<std::size_t>(k)] = std::sqrt(lambda(k));
    }
    return r;
}

FTSVDResult ftsvd_second(const Tensor3& a)
{
    require_third_order(a);
    const std::size_t i1 = a.dim(0);
    const std::size_t i2 = a.dim(1);
    const std::size_t i3 = a.dim(2);

    FTSVDResult r;
    r.kind = FtsvdKind::SecondKind;
    r.U = Tensor({i1 * i3, i1 * i3});
    r.V = Tensor({i2 * i3, i2 * i3});
    r.S = Tensor({i1, i2, i3});
    for (std::size_t k = 0; k < i3; ++k) {
        const Eigen::MatrixXd slice = to_eigen(frontal_slice(a, k));
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(slice, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const auto& u = svd.matrixU();
        const auto& v = svd.matrixV();
        const auto& sv = svd.singularValues();
        for (std::size_t i = 0; i < i1; ++i) {
            for (std::size_t j = 0; j < i1; ++j) {
                r.U(k * i1 + i, k * i1 + j) = u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            }
        }
        for (std::size_t i = 0; i < i2; ++i) {
            for (std::size_t j = 0; j < i2; ++j) {
                r.V(k * i2 + i, k * i2 + j) = v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            }
        }
        for (Eigen::Index d = 0; d < sv.size(); ++d) {
            r.S(static_cast<std::size_t>(d), static_cast<std::size_t>(d), k) = sv(d);
            r.singular_values.push_back(sv(d));
        }
    }
    std::sort(r.singular_values.begin(), r.singular_values.end(), std::greater<>());
    return r;
}

Tensor3 reconstruct(const FTSVDResult& r)
{
    if (r.kind == FtsvdKind::FirstKind) {
        const Tensor left = flexible_product(r.U, r.S, 1, FlexOrder::Forward, FlexOrder::Forward);
        return flexible_product(left, transpose(r.V), 1, FlexOrder::Reverse, FlexOrder::Forward);
    }
    const std::size_t i1 = r.S.dim(0);
    const std::size_t i2 = r.S.dim(1);
    const std::size_t i3 = r.S.dim(2);
    if (r.U.dims() != std::vector<std::size_t>{i1 * i3, i1 * i3} ||
        r.V.dims() != std::vector<std::size_t>{i2 * i3, i2 * i3}) {
        throw DimensionMismatch("second-kind factors do not match the core tensor");
    }
    Tensor3 out({i1, i2, i3});
    for (std::size_t k = 0; k < i3; ++k) {
        for (std::size_t i = 0; i < i1; ++i) {
            for (std::size_t j = 0; j < i2; ++j) {
                double acc = 0.0;
                for (std::size_t d = 0; d < std::min(i1, i2); ++d) {
                    acc += r.U(k * i1 + i, k * i1 + d) * r.S(d, d, k) * r.V(k * i2 + j, k * i2 + d);
                }
                out(i, j, k) = acc;
            }
        }
    }
    return out;
}

} // namespace sigtext
