#pragma once

#include "sigtext/tensor.hpp"

#include <vector>

namespace sigtext {

enum class FtsvdKind { FirstKind, SecondKind };

// First kind: U is I1 x I1, V is I3 x I3, S = U^T *1|1,1> A *1|2,1> V (I1 x I2 x I3),
// singular_values are sqrt(eig(A *2|2,1> A^T)).
//
// Second kind: each frontal slice A(:,:,k) is factored on its own, so S has
// diagonal frontal slices. U and V are kept in their block-diagonal unfolded
// form, (I1 I3) x (I1 I3) and (I2 I3) x (I2 I3); block k belongs to slice k.
// singular_values merges the diagonals of all slices.
struct FTSVDResult {
    FtsvdKind kind = FtsvdKind::FirstKind;
    Tensor U;
    Tensor S;
    Tensor V;
    std::vector<double> singular_values;  // descending, non-negative
};

FTSVDResult ftsvd_first(const Tensor3& a);
FTSVDResult ftsvd_second(const Tensor3& a);

// U *1|1,1> S *1|2,1> V^T for the first kind; slice-wise U_k S_k V_k^T for the second.
Tensor3 reconstruct(const FTSVDResult& r);

// Frontal slice k of a third-order tensor as an I1 x I2 matrix.
Tensor frontal_slice(const Tensor3& a, std::size_t k);

} // namespace sigtext
