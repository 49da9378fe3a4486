#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <vector>

namespace eon {

using Scalar = double;
using Index = Eigen::Index;

using Vec = Eigen::VectorX<Scalar>;
using Mat = Eigen::MatrixX<Scalar>;

using Triplet = Eigen::Triplet<Scalar>;
using Triplets = std::vector<Triplet>;
using SparseMat = Eigen::SparseMatrix<Scalar>;

}  // namespace eon
