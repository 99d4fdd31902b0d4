#pragma once

#include <Eigen/Dense>

namespace proxibound {

struct NnlsResult {
  Eigen::VectorXd x;       // solution, entrywise >= 0
  double rnorm = 0.0;      // ||A x - b||_2
  int iterations = 0;
  bool converged = true;   // false only if the iteration cap was hit
};

// Lawson-Hanson active-set solve of min ||A x - b|| subject to x >= 0.
// The systems in this library are tiny (proxy cardinality squared at most),
// so a dense QR per passive-set update is entirely adequate.
NnlsResult nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);

}  // namespace proxibound
