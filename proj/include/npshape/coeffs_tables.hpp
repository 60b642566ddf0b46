#pragma once

#include <Eigen/Dense>

#include "npshape/types.hpp"

namespace npshape {

// Contracted moments M^{alpha beta}_{kn}; matrices are (k-1, n-1) indexed.
// The first superscript pairs with the test polynomial P_k^alpha, the second
// with the excitation P_n^beta.
struct GptTable {
  int order = 0;
  Eigen::MatrixXd Mcc, Mcs, Msc, Mss;

  explicit GptTable(int n = 0)
      : order(n), Mcc(Eigen::MatrixXd::Zero(n, n)), Mcs(Eigen::MatrixXd::Zero(n, n)),
        Msc(Eigen::MatrixXd::Zero(n, n)), Mss(Eigen::MatrixXd::Zero(n, n)) {}
};

// Complex tensors gamma^1_{kn}, gamma^2_{kn} built from the contracted table.
struct GammaTable {
  int order = 0;
  Eigen::MatrixXcd g1, g2;

  explicit GammaTable(int n = 0)
      : order(n), g1(Eigen::MatrixXcd::Zero(n, n)), g2(Eigen::MatrixXcd::Zero(n, n)) {}

  Complex gamma1(int k, int n) const { return g1(k - 1, n - 1); }
  Complex gamma2(int k, int n) const { return g2(k - 1, n - 1); }
};

}  // namespace npshape
