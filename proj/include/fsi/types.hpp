#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace fsi {

using SpMat = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;
using Triplet = Eigen::Triplet<double>;

}  // namespace fsi
