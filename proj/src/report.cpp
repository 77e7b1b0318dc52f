#include "kinv/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace kinv {

std::string format_full(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

void write_history_csv(const std::string& path, const std::vector<IterationRecord>& history) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << kHistoryCsvHeader << "\n";
    for (const auto& rec : history) {
        out << rec.iter << "," << format_full(rec.mean_rel_err) << ","
            << format_full(rec.cov_rel_err) << "," << format_full(rec.opt_err) << ","
            << rec.fwd_evals << "," << format_full(rec.wall_ms) << "\n";
    }
}

std::vector<IterationRecord> read_history_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);

    std::string line;
    if (!std::getline(in, line) || line != kHistoryCsvHeader)
        throw Error("unexpected CSV header in " + path);

    std::vector<IterationRecord> history;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        IterationRecord rec;
        std::string field;
        std::getline(row, field, ',');
        rec.iter = std::stoi(field);
        std::getline(row, field, ',');
        rec.mean_rel_err = std::stod(field);
        std::getline(row, field, ',');
        rec.cov_rel_err = std::stod(field);
        std::getline(row, field, ',');
        rec.opt_err = std::stod(field);
        std::getline(row, field, ',');
        rec.fwd_evals = std::stol(field);
        std::getline(row, field, ',');
        rec.wall_ms = std::stod(field);
        history.push_back(rec);
    }
    return history;
}

void SummaryDoc::set(const std::string& key, const std::string& value) {
    for (auto& [k, v] : fields_) {
        if (k == key) {
            v = value;
            return;
        }
    }
    fields_.emplace_back(key, value);
}

void SummaryDoc::set(const std::string& key, double value) { set(key, format_full(value)); }

void SummaryDoc::set(const std::string& key, long value) { set(key, std::to_string(value)); }

void SummaryDoc::set(const std::string& key, const Vector& value) {
    std::string text;
    for (Index i = 0; i < value.size(); ++i) {
        if (i) text += " ";
        text += format_full(value(i));
    }
    set(key, text);
}

bool SummaryDoc::has(const std::string& key) const {
    for (const auto& [k, v] : fields_)
        if (k == key) return true;
    return false;
}

std::string SummaryDoc::get(const std::string& key) const {
    for (const auto& [k, v] : fields_)
        if (k == key) return v;
    throw Error("summary is missing key: " + key);
}

double SummaryDoc::get_double(const std::string& key) const { return std::stod(get(key)); }

long SummaryDoc::get_long(const std::string& key) const { return std::stol(get(key)); }

Vector SummaryDoc::get_vector(const std::string& key) const {
    std::istringstream in(get(key));
    std::vector<double> values;
    double x;
    while (in >> x) values.push_back(x);
    return Eigen::Map<const Vector>(values.data(), static_cast<Index>(values.size()));
}

void SummaryDoc::set_matrix(const std::string& key, const Matrix& value) {
    set(key + "_rows", static_cast<long>(value.rows()));
    std::string text;
    for (Index i = 0; i < value.rows(); ++i)
        for (Index j = 0; j < value.cols(); ++j) {
            if (i || j) text += " ";
            text += format_full(value(i, j));
        }
    set(key, text);
}

Matrix SummaryDoc::get_matrix(const std::string& key) const {
    const long rows = get_long(key + "_rows");
    const Vector flat = get_vector(key);
    if (rows <= 0 || flat.size() % rows != 0)
        throw Error("malformed matrix entry for key: " + key);
    const Index cols = flat.size() / rows;
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = flat(i * cols + j);
    return m;
}

void SummaryDoc::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    for (const auto& [k, v] : fields_) out << k << ": " << v << "\n";
}

SummaryDoc SummaryDoc::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);

    SummaryDoc doc;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto colon = line.find(':');
        if (colon == std::string::npos) continue;
        std::string value = line.substr(colon + 1);
        if (!value.empty() && value[0] == ' ') value.erase(0, 1);
        doc.fields_.emplace_back(line.substr(0, colon), value);
    }
    return doc;
}

std::optional<GaussianBelief> summary_moments(const SummaryDoc& doc) {
    if (!doc.has("final_mean") || !doc.has("final_cov")) return std::nullopt;
    GaussianBelief belief;
    belief.mean = doc.get_vector("final_mean");
    belief.cov = doc.get_matrix("final_cov");
    return belief;
}

void embed_moments(SummaryDoc& doc, const GaussianBelief& belief) {
    doc.set("final_mean", belief.mean);
    doc.set_matrix("final_cov", belief.cov);
}

} // namespace kinv
