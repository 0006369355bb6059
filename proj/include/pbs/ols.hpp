#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pbs/types.hpp"

namespace pbs {

struct RegressionResult {
    std::vector<std::string> names;
    std::vector<double> coef;
    std::vector<double> se;  // homoskedastic classical standard errors
    double r2{0.0};          // on the demeaned model when fixed effects are absorbed
    size_t n{0};
    size_t absorbed{0};  // number of fixed-effect groups absorbed
};

// Column-major design: X[j] is the j-th regressor over all rows. When
// `groups` is non-empty it assigns each row to a fixed-effect group; the
// within transformation demeans y and X by group before the normal
// equations, which is coefficient-equivalent to group dummies.
// Throws std::invalid_argument naming the offending column when the
// (demeaned) design is rank deficient.
RegressionResult ols(const std::vector<double>& y, const std::vector<std::vector<double>>& X,
                     const std::vector<std::string>& names,
                     const std::vector<int>& groups = {});

}  // namespace pbs
