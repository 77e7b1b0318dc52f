#include "kinv/evaluate.hpp"

#include <exception>

#include <omp.h>

namespace kinv {

namespace {

void check_column(const Vector& value, Index out_rows, Index j) {
    if (value.size() != out_rows)
        throw ShapeMismatchError("forward output length mismatch at column " + std::to_string(j));
}

} // namespace

Matrix evaluate_columns_serial(const IndexedMap& f, const Matrix& points, Index out_rows) {
    Matrix out(out_rows, points.cols());
    for (Index j = 0; j < points.cols(); ++j) {
        const Vector value = f(j, points.col(j));
        check_column(value, out_rows, j);
        out.col(j) = value;
    }
    return out;
}

Matrix evaluate_columns_openmp(const IndexedMap& f, const Matrix& points, Index out_rows, int jobs) {
    Matrix out(out_rows, points.cols());
    std::exception_ptr first_error = nullptr;
    const int threads = jobs > 0 ? jobs : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (Index j = 0; j < points.cols(); ++j) {
        if (first_error) continue;
        try {
            const Vector value = f(j, points.col(j));
            check_column(value, out_rows, j);
            out.col(j) = value;
        } catch (...) {
#pragma omp critical
            {
                if (!first_error) first_error = std::current_exception();
            }
        }
    }

    if (first_error) std::rethrow_exception(first_error);
    return out;
}

Matrix evaluate_columns(const IndexedMap& f, const Matrix& points, Index out_rows, int jobs) {
    if (jobs == 1) return evaluate_columns_serial(f, points, out_rows);
    return evaluate_columns_openmp(f, points, out_rows, jobs);
}

} // namespace kinv
