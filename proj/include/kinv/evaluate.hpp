#pragma once

#include <functional>

#include "kinv/core.hpp"

namespace kinv {

/// Column-indexed map: j is the column position, used by fidelity routing.
using IndexedMap = std::function<Vector(Index j, const Vector& theta)>;

/// Serial reference implementation of the particle fan-out. Kept alongside the
/// OpenMP kernel so tests can compare the two bit for bit.
Matrix evaluate_columns_serial(const IndexedMap& f, const Matrix& points, Index out_rows);

/// OpenMP fan-out over particle columns. Each column is written independently,
/// so the result is identical to the serial reference for any thread count.
/// jobs <= 0 uses the OpenMP default.
Matrix evaluate_columns_openmp(const IndexedMap& f, const Matrix& points, Index out_rows, int jobs);

/// Dispatch: jobs == 1 selects the serial reference, anything else the OpenMP
/// kernel capped at `jobs` threads (0 = hardware default).
Matrix evaluate_columns(const IndexedMap& f, const Matrix& points, Index out_rows, int jobs = 0);

} // namespace kinv
