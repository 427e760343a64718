#pragma once

#include <functional>

namespace telsim {

/// Adaptive Simpson integration of f over [a, b] to absolute tolerance tol.
/// Throws on non-convergence (depth exhaustion with the error bound unmet).
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth = 40);

}  // namespace telsim
