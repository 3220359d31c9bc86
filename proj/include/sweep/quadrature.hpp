#pragma once

#include <functional>

namespace sweep {

/// Composite Simpson rule on [a, b]; `intervals` is rounded up to even.
double composite_simpson(const std::function<double(double)>& f, double a,
                         double b, int intervals);

/// Adaptive Simpson to the given absolute tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol);

}  // namespace sweep
