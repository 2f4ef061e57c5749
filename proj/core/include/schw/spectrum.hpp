#pragma once

#include <string_view>
#include <vector>

namespace schw {

enum class SpectrumMethod { shooting, finite_difference };

std::string_view to_string(SpectrumMethod method);

struct SpectrumEntry {
    int k;
    int n;          ///< 1-based index within mode k
    double lambda;  ///< physical units, 1/length^2
};

struct SpectrumTolerances {
    double eigen_tol = 0.0;  ///< bracket width on lambda (shooting) or bisection width (fd)
    double ode_tol = 0.0;    ///< shooting only
    int grid_size = 0;       ///< finite-difference only
};

/// Eigenvalues of the Jacobi operator on the annulus m/2 <= |x| <= R, sorted by (k, n).
struct Spectrum {
    std::vector<SpectrumEntry> entries;
    SpectrumMethod method = SpectrumMethod::shooting;
    double R = 0.0;
    SpectrumTolerances tolerances;
};

}  // namespace schw
