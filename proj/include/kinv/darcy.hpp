#pragma once

#include <array>
#include <string>
#include <vector>

#include "kinv/core.hpp"

namespace kinv {

/// Truncated Karhunen-Loeve expansion of a log-permeability field on the unit
/// square: log a = sum_k theta_k sqrt(lambda_k) psi_k with the Neumann cosine
/// basis and lambda_l = (pi^2 |l|^2 + tau^2)^-d. Modes are tabulated once at
/// the cell centers of an n x n grid and kept sorted by descending eigenvalue
/// (ties broken lexicographically in the wavenumber pair).
struct KlField {
    int grid_n = 0;
    double tau = 3.0;
    double d = 2.0;
    Vector eigenvalues;                       // descending
    std::vector<std::array<int, 2>> wavenumbers;
    Matrix scaled_modes;                      // (n*n) x n_modes, column k = sqrt(lambda_k) psi_k

    int n_modes() const { return static_cast<int>(eigenvalues.size()); }
    Index cells() const { return static_cast<Index>(grid_n) * grid_n; }
};

KlField make_kl_field(int grid_n, int n_modes, double tau = 3.0, double d = 2.0);

/// Truncated series on the grid; len(theta) may be shorter than n_modes.
Vector kl_log_permeability(const KlField& field, const Vector& theta);

/// Basis function value at a physical point (test oracle support).
double kl_basis(int l1, int l2, double x1, double x2);

struct DarcySolution {
    Vector pressure;     // cell-centered values, x1-fastest ordering
    Vector observations; // pressure at the 7 x 7 interior lattice
};

/// Pressure solver for -div(a grad p) = f with p = 0 on the boundary,
/// discretized by a conservative cell-centered 5-point scheme with harmonic
/// face averaging of the permeability. Immutable after construction; solve()
/// keeps all scratch state local so concurrent evaluations are safe.
class DarcyModel {
public:
    DarcyModel(int grid_n, int n_modes, double tau = 3.0, double d = 2.0);

    DarcySolution solve(const Vector& theta) const;
    Vector observe(const Vector& theta) const { return solve(theta).observations; }

    const KlField& field() const { return field_; }
    int grid_n() const { return field_.grid_n; }

    /// 49 equidistant interior measurement locations (i/8, j/8), i,j = 1..7.
    static std::vector<std::array<double, 2>> measurement_points();
    static constexpr int n_observations = 49;

    /// Bilinear interpolation of a cell-centered grid function at a point.
    double interpolate(const Vector& grid_values, double x1, double x2) const;

    /// Piecewise-constant source: 1000 / 2000 / 3000 on the three x2 bands.
    static double source(double x2);

private:
    KlField field_;
    Vector source_; // f at cell centers
};

/// Frozen benchmark data: truth coefficients drawn from the prior and noisy
/// observations of the resulting pressure field (unit observation noise).
struct DarcyInstance {
    int grid_n = 0;
    int n_modes = 0;
    double tau = 3.0;
    double d = 2.0;
    std::uint64_t seed = 0;
    Vector theta_ref;
    Vector y_ref;
};

DarcyInstance make_darcy_instance(int grid_n, int n_modes, std::uint64_t seed);

/// Inversion problem over the KL coefficients with prior N(0, I) and unit
/// observation noise. solve_grid_n = 0 keeps the instance grid; another value
/// evaluates the forward map at that resolution (used by the bi-fidelity
/// dispatch) while keeping the instance data.
InverseProblem darcy_problem(const DarcyInstance& instance, int solve_grid_n = 0);

void save_darcy_instance(const std::string& path, const DarcyInstance& instance);
DarcyInstance load_darcy_instance(const std::string& path);

} // namespace kinv
