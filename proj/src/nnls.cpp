#include "proxibound/nnls.hpp"

#include <limits>
#include <vector>

namespace proxibound {

NnlsResult nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  const int n = static_cast<int>(A.cols());
  const double tol = 10.0 * std::numeric_limits<double>::epsilon() *
                     A.cwiseAbs().colwise().sum().maxCoeff() * std::max<int>(A.rows(), n);
  const int max_iter = 3 * n + 30;

  NnlsResult res;
  res.x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(n, false);

  Eigen::VectorXd w = A.transpose() * (b - A * res.x);
  while (res.iterations < max_iter) {
    // most violated dual coordinate among the active (zero) set
    int j = -1;
    double wmax = tol;
    for (int i = 0; i < n; ++i)
      if (!passive[i] && w[i] > wmax) {
        wmax = w[i];
        j = i;
      }
    if (j < 0) break;  // KKT satisfied
    passive[j] = true;

    while (true) {
      ++res.iterations;
      std::vector<int> pidx;
      for (int i = 0; i < n; ++i)
        if (passive[i]) pidx.push_back(i);
      Eigen::MatrixXd Ap(A.rows(), pidx.size());
      for (std::size_t k = 0; k < pidx.size(); ++k) Ap.col(k) = A.col(pidx[k]);
      Eigen::VectorXd sp = Ap.colPivHouseholderQr().solve(b);

      if ((sp.array() > 0.0).all()) {
        res.x.setZero();
        for (std::size_t k = 0; k < pidx.size(); ++k) res.x[pidx[k]] = sp[k];
        break;
      }
      // step toward sp until the first passive coordinate hits zero
      double step = 1.0;
      for (std::size_t k = 0; k < pidx.size(); ++k)
        if (sp[k] <= 0.0) {
          double xi = res.x[pidx[k]];
          if (xi - sp[k] > 0.0) step = std::min(step, xi / (xi - sp[k]));
        }
      for (std::size_t k = 0; k < pidx.size(); ++k) {
        int i = pidx[k];
        res.x[i] += step * (sp[k] - res.x[i]);
      }
      for (int i = 0; i < n; ++i)
        if (passive[i] && res.x[i] <= tol) {
          res.x[i] = 0.0;
          passive[i] = false;
        }
      if (res.iterations >= max_iter) {
        res.converged = false;
        break;
      }
    }
    if (!res.converged) break;
    w = A.transpose() * (b - A * res.x);
  }
  res.rnorm = (A * res.x - b).norm();
  return res;
}

}  // namespace proxibound
