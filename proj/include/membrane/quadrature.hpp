#pragma once

#include <functional>

namespace membrane {

// Adaptive Simpson on [a, b] with Richardson correction. Stops locally when
// the two-panel estimate agrees with the one-panel estimate to 15*tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12, int max_depth = 50);

}  // namespace membrane
