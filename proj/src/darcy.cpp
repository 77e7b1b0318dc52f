#include "kinv/darcy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <memory>
#include <numbers>
#include <sstream>

#include <Eigen/Sparse>

namespace kinv {

namespace {

constexpr double kPi = std::numbers::pi;

struct Mode {
    int l1, l2;
    double lambda;
};

std::vector<Mode> leading_modes(int n_modes, double tau, double d) {
    // enumerate a lattice box generously larger than n_modes, then sort
    const int box = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n_modes)))) + 2;
    std::vector<Mode> modes;
    modes.reserve(static_cast<std::size_t>(box + 1) * (box + 1));
    for (int l1 = 0; l1 <= box; ++l1)
        for (int l2 = 0; l2 <= box; ++l2) {
            if (l1 == 0 && l2 == 0) continue;
            const double norm2 = static_cast<double>(l1 * l1 + l2 * l2);
            modes.push_back({l1, l2, std::pow(kPi * kPi * norm2 + tau * tau, -d)});
        }
    std::sort(modes.begin(), modes.end(), [](const Mode& a, const Mode& b) {
        if (a.lambda != b.lambda) return a.lambda > b.lambda;
        if (a.l1 != b.l1) return a.l1 < b.l1;
        return a.l2 < b.l2;
    });
    modes.resize(n_modes);
    return modes;
}

} // namespace

double kl_basis(int l1, int l2, double x1, double x2) {
    if (l2 == 0) return std::numbers::sqrt2 * std::cos(kPi * l1 * x1);
    if (l1 == 0) return std::numbers::sqrt2 * std::cos(kPi * l2 * x2);
    return 2.0 * std::cos(kPi * l1 * x1) * std::cos(kPi * l2 * x2);
}

KlField make_kl_field(int grid_n, int n_modes, double tau, double d) {
    if (grid_n < 2) throw Error("KL grid needs at least 2 cells per side");
    if (n_modes < 1) throw Error("KL field needs at least one mode");

    const auto modes = leading_modes(n_modes, tau, d);

    KlField field;
    field.grid_n = grid_n;
    field.tau = tau;
    field.d = d;
    field.eigenvalues.resize(n_modes);
    field.wavenumbers.resize(n_modes);
    field.scaled_modes.resize(field.cells(), n_modes);

    const double h = 1.0 / grid_n;
    for (int k = 0; k < n_modes; ++k) {
        field.eigenvalues(k) = modes[k].lambda;
        field.wavenumbers[k] = {modes[k].l1, modes[k].l2};
        const double scale = std::sqrt(modes[k].lambda);
        for (int j = 0; j < grid_n; ++j) {
            const double x2 = (j + 0.5) * h;
            for (int i = 0; i < grid_n; ++i) {
                const double x1 = (i + 0.5) * h;
                field.scaled_modes(i + static_cast<Index>(j) * grid_n, k) =
                    scale * kl_basis(modes[k].l1, modes[k].l2, x1, x2);
            }
        }
    }
    return field;
}

Vector kl_log_permeability(const KlField& field, const Vector& theta) {
    if (theta.size() > field.n_modes())
        throw ShapeMismatchError("more coefficients than tabulated modes");
    return field.scaled_modes.leftCols(theta.size()) * theta;
}

double DarcyModel::source(double x2) {
    if (x2 <= 4.0 / 6.0) return 1000.0;
    if (x2 <= 5.0 / 6.0) return 2000.0;
    return 3000.0;
}

std::vector<std::array<double, 2>> DarcyModel::measurement_points() {
    std::vector<std::array<double, 2>> pts;
    pts.reserve(n_observations);
    for (int j = 1; j <= 7; ++j)
        for (int i = 1; i <= 7; ++i) pts.push_back({i / 8.0, j / 8.0});
    return pts;
}

DarcyModel::DarcyModel(int grid_n, int n_modes, double tau, double d)
    : field_(make_kl_field(grid_n, n_modes, tau, d)) {
    const double h = 1.0 / grid_n;
    source_.resize(field_.cells());
    for (int j = 0; j < grid_n; ++j) {
        const double x2 = (j + 0.5) * h;
        for (int i = 0; i < grid_n; ++i)
            source_(i + static_cast<Index>(j) * grid_n) = source(x2);
    }
}

double DarcyModel::interpolate(const Vector& grid_values, double x1, double x2) const {
    const int n = field_.grid_n;
    const double h = 1.0 / n;
    // cell-center coordinates; clamp so boundary-adjacent points extrapolate flat
    const auto locate = [&](double x) {
        double g = x / h - 0.5;
        int i0 = static_cast<int>(std::floor(g));
        i0 = std::clamp(i0, 0, n - 2);
        const double w = std::clamp(g - i0, 0.0, 1.0);
        return std::pair<int, double>{i0, w};
    };
    const auto [i0, wx] = locate(x1);
    const auto [j0, wy] = locate(x2);

    const auto v = [&](int i, int j) { return grid_values(i + static_cast<Index>(j) * n); };
    return (1 - wx) * (1 - wy) * v(i0, j0) + wx * (1 - wy) * v(i0 + 1, j0) +
           (1 - wx) * wy * v(i0, j0 + 1) + wx * wy * v(i0 + 1, j0 + 1);
}

DarcySolution DarcyModel::solve(const Vector& theta) const {
    if (!theta.allFinite()) throw SolverFailureError("non-finite permeability coefficients");

    const int n = field_.grid_n;
    const double h = 1.0 / n;
    const double inv_h2 = 1.0 / (h * h);
    const Vector log_a = kl_log_permeability(field_, theta);
    const Vector a = log_a.array().exp();

    const auto idx = [n](int i, int j) { return i + static_cast<Index>(j) * n; };
    const auto harmonic = [](double l, double r) { return 2.0 * l * r / (l + r); };

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(5) * n * n);

    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const Index row = idx(i, j);
            const double ac = a(row);
            double diag = 0.0;

            // boundary faces see p = 0 at half-cell distance
            const auto face = [&](int ni, int nj) {
                if (ni < 0 || ni >= n || nj < 0 || nj >= n) {
                    diag += 2.0 * ac * inv_h2;
                    return;
                }
                const double t = harmonic(ac, a(idx(ni, nj))) * inv_h2;
                diag += t;
                triplets.emplace_back(row, idx(ni, nj), -t);
            };
            face(i - 1, j);
            face(i + 1, j);
            face(i, j - 1);
            face(i, j + 1);
            triplets.emplace_back(row, row, diag);
        }
    }

    Eigen::SparseMatrix<double> system(field_.cells(), field_.cells());
    system.setFromTriplets(triplets.begin(), triplets.end());

    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> solver(system);
    if (solver.info() != Eigen::Success)
        throw SolverFailureError("pressure system factorization failed");

    DarcySolution solution;
    solution.pressure = solver.solve(source_);
    if (solver.info() != Eigen::Success)
        throw SolverFailureError("pressure solve failed");

    solution.observations.resize(n_observations);
    const auto pts = measurement_points();
    for (int k = 0; k < n_observations; ++k)
        solution.observations(k) = interpolate(solution.pressure, pts[k][0], pts[k][1]);
    return solution;
}

DarcyInstance make_darcy_instance(int grid_n, int n_modes, std::uint64_t seed) {
    if (grid_n < 16) throw Error("instance grid must be at least 16 cells per side");

    DarcyInstance instance;
    instance.grid_n = grid_n;
    instance.n_modes = n_modes;
    instance.seed = seed;

    Rng rng(seed);
    instance.theta_ref = rng.gauss_vector(n_modes);

    const DarcyModel model(grid_n, n_modes, instance.tau, instance.d);
    instance.y_ref = model.observe(instance.theta_ref) + rng.gauss_vector(DarcyModel::n_observations);
    return instance;
}

InverseProblem darcy_problem(const DarcyInstance& instance, int solve_grid_n) {
    const int grid = solve_grid_n > 0 ? solve_grid_n : instance.grid_n;
    auto model = std::make_shared<const DarcyModel>(grid, instance.n_modes, instance.tau,
                                                    instance.d);

    InverseProblem p;
    p.y = instance.y_ref;
    p.noise_cov = Matrix::Identity(DarcyModel::n_observations, DarcyModel::n_observations);
    p.prior_mean = Vector::Zero(instance.n_modes);
    p.prior_cov = Matrix::Identity(instance.n_modes, instance.n_modes);
    p.forward = [model](const Vector& theta) { return model->observe(theta); };
    return p;
}

namespace {

void write_vector(std::ostream& os, const char* key, const Vector& v) {
    os << key << ":";
    for (Index i = 0; i < v.size(); ++i) os << " " << std::setprecision(17) << v(i);
    os << "\n";
}

Vector parse_vector(const std::string& text) {
    std::istringstream in(text);
    std::vector<double> values;
    double x;
    while (in >> x) values.push_back(x);
    return Eigen::Map<const Vector>(values.data(), static_cast<Index>(values.size()));
}

} // namespace

void save_darcy_instance(const std::string& path, const DarcyInstance& instance) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << "grid_n: " << instance.grid_n << "\n";
    out << "n_modes: " << instance.n_modes << "\n";
    out << "tau: " << std::setprecision(17) << instance.tau << "\n";
    out << "d: " << std::setprecision(17) << instance.d << "\n";
    out << "seed: " << instance.seed << "\n";
    write_vector(out, "theta_ref", instance.theta_ref);
    write_vector(out, "y_ref", instance.y_ref);
}

DarcyInstance load_darcy_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);

    DarcyInstance instance;
    std::string line;
    while (std::getline(in, line)) {
        const auto colon = line.find(':');
        if (colon == std::string::npos) continue;
        const std::string key = line.substr(0, colon);
        const std::string value = line.substr(colon + 1);
        if (key == "grid_n") instance.grid_n = std::stoi(value);
        else if (key == "n_modes") instance.n_modes = std::stoi(value);
        else if (key == "tau") instance.tau = std::stod(value);
        else if (key == "d") instance.d = std::stod(value);
        else if (key == "seed") instance.seed = std::stoull(value);
        else if (key == "theta_ref") instance.theta_ref = parse_vector(value);
        else if (key == "y_ref") instance.y_ref = parse_vector(value);
    }
    if (instance.grid_n == 0 || instance.theta_ref.size() == 0 || instance.y_ref.size() == 0)
        throw Error("incomplete instance file: " + path);
    return instance;
}

} // namespace kinv
