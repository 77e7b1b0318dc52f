#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kinv/methods.hpp"

namespace kinv {

inline constexpr const char* kHistoryCsvHeader =
    "iter,mean_rel_err,cov_rel_err,opt_err,fwd_evals,wall_ms";

void write_history_csv(const std::string& path, const std::vector<IterationRecord>& history);
std::vector<IterationRecord> read_history_csv(const std::string& path);

/// Ordered key/value document with full-precision numeric encoding; used for
/// run summaries, moment fixtures and comparison reports.
class SummaryDoc {
public:
    void set(const std::string& key, const std::string& value);
    void set(const std::string& key, double value);
    void set(const std::string& key, long value);
    void set(const std::string& key, const Vector& value);

    bool has(const std::string& key) const;
    std::string get(const std::string& key) const;
    double get_double(const std::string& key) const;
    long get_long(const std::string& key) const;
    Vector get_vector(const std::string& key) const;

    /// Matrices are stored row-major on a single line next to a *_rows key.
    void set_matrix(const std::string& key, const Matrix& value);
    Matrix get_matrix(const std::string& key) const;

    void save(const std::string& path) const;
    static SummaryDoc load(const std::string& path);

    const std::vector<std::pair<std::string, std::string>>& fields() const { return fields_; }

private:
    std::vector<std::pair<std::string, std::string>> fields_;
};

/// Final moments embedded in a summary (the cross-method reference format).
std::optional<GaussianBelief> summary_moments(const SummaryDoc& doc);
void embed_moments(SummaryDoc& doc, const GaussianBelief& belief);

std::string format_full(double value);

} // namespace kinv
