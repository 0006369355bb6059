#include "pbs/ols.hpp"

#include <Eigen/Dense>

#include <map>
#include <stdexcept>

namespace pbs {

RegressionResult ols(const std::vector<double>& y, const std::vector<std::vector<double>>& X,
                     const std::vector<std::string>& names,
                     const std::vector<int>& groups) {
    const size_t n = y.size();
    const size_t k = X.size();
    if (k == 0) throw std::invalid_argument("ols: empty design");
    if (names.size() != k) throw std::invalid_argument("ols: names/columns mismatch");
    for (const auto& col : X)
        if (col.size() != n) throw std::invalid_argument("ols: ragged design");
    if (!groups.empty() && groups.size() != n) throw std::invalid_argument("ols: groups size mismatch");

    Eigen::VectorXd yv(n);
    Eigen::MatrixXd Xm(n, k);
    for (size_t i = 0; i < n; ++i) yv(i) = y[i];
    for (size_t j = 0; j < k; ++j)
        for (size_t i = 0; i < n; ++i) Xm(i, j) = X[j][i];

    size_t n_groups = 0;
    if (!groups.empty()) {
        // within transformation: subtract group means
        std::map<int, std::pair<Eigen::VectorXd, double>> acc;  // sums of X row, y
        std::map<int, int> counts;
        for (size_t i = 0; i < n; ++i) {
            auto [it, inserted] = acc.try_emplace(groups[i], Eigen::VectorXd::Zero(k), 0.0);
            it->second.first += Xm.row(i).transpose();
            it->second.second += yv(i);
            counts[groups[i]] += 1;
        }
        n_groups = acc.size();
        for (size_t i = 0; i < n; ++i) {
            const auto& s = acc.at(groups[i]);
            const double c = counts.at(groups[i]);
            Xm.row(i) -= (s.first / c).transpose();
            yv(i) -= s.second / c;
        }
    }

    if (n <= k + n_groups)
        throw std::invalid_argument("ols: n too small for the design");

    const Eigen::MatrixXd xtx = Xm.transpose() * Xm;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Xm);
    qr.setThreshold(1e-10);
    if (static_cast<size_t>(qr.rank()) < k) {
        // the dropped pivot names the first column not covered by the rank
        const auto perm = qr.colsPermutation().indices();
        const size_t bad = static_cast<size_t>(perm(qr.rank()));
        throw std::invalid_argument("ols: singular design, column '" + names[bad] + "'");
    }

    const Eigen::VectorXd xty = Xm.transpose() * yv;
    const Eigen::MatrixXd xtx_inv = xtx.ldlt().solve(Eigen::MatrixXd::Identity(k, k));
    const Eigen::VectorXd beta = xtx_inv * xty;

    const Eigen::VectorXd resid = yv - Xm * beta;
    const double rss = resid.squaredNorm();
    const double ybar = yv.mean();
    double tss = 0.0;
    for (size_t i = 0; i < n; ++i) tss += (yv(i) - ybar) * (yv(i) - ybar);

    const double dof = static_cast<double>(n - k - n_groups);
    const double sigma2 = rss / dof;

    RegressionResult r;
    r.names = names;
    r.n = n;
    r.absorbed = n_groups;
    r.r2 = tss > 0.0 ? 1.0 - rss / tss : 1.0;
    r.coef.resize(k);
    r.se.resize(k);
    for (size_t j = 0; j < k; ++j) {
        r.coef[j] = beta(j);
        r.se[j] = std::sqrt(sigma2 * xtx_inv(j, j));
    }
    return r;
}

}  // namespace pbs
