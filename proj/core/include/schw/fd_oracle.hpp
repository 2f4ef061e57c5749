#pragma once

// Second-order finite-difference discretization of one Fourier mode of the Jacobi
// operator, in divergence form
//
//   -(r u')' + (k^2/r - r V) u = lambda r w u,   V = (m/r^3)(1+m/2r)^-2,  w = (1+m/2r)^4,
//
// on a uniform grid over [m/2, R], with u'(m/2) = 0 (half control volume) and u(R) = 0
// (row elimination). Serves as an independent check of the shooting solver.

#include <vector>

#include "schw/geometry.hpp"
#include "schw/spectrum.hpp"

namespace schw {

struct DiscreteModeProblem {
    SchwarzschildModel model;
    int k;
    double R;
    int n;                              ///< number of cells; unknowns u_0 .. u_{n-1}
    std::vector<double> grid;           ///< n + 1 nodes, grid[n] = R
    std::vector<double> diagonal;       ///< stiffness diagonal, size n
    std::vector<double> off_diagonal;   ///< stiffness sub/super diagonal, size n - 1
    std::vector<double> mass_weights;   ///< diagonal mass matrix, size n, > 0

    /// Dense stiffness matrix (row major, n x n); for inspection and tests.
    std::vector<double> dense_stiffness() const;
};

/// Throws DomainError for n < 16, R <= m/2, or k != 0 on the flat (m = 0) disc.
DiscreteModeProblem assemble(const SchwarzschildModel& model, int k, double R, int n = 1024);

/// Number of eigenvalues of the generalized problem strictly below x (Sturm count of the
/// congruence-reduced tridiagonal matrix).
int count_below(const DiscreteModeProblem& problem, double x);

/// Lowest `how_many` eigenvalues by Sturm-sequence bisection, ascending.
/// Throws DomainError if how_many >= n.
Spectrum lowest_eigenvalues(const DiscreteModeProblem& problem, int how_many);

/// Richardson extrapolation (4 lambda(2n) - lambda(n)) / 3 of the index-th (1-based)
/// eigenvalue from grids n and 2n.
double richardson_eigenvalue(const SchwarzschildModel& model, int k, double R, int n, int index = 1);

}  // namespace schw
