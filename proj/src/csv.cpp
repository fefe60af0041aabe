#include "irtens/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace irtens {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

double parse_double(const std::string& s, std::size_t line_no) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    while (first != last && (*first == ' ' || *first == '\t')) ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    while (ptr != last && (*ptr == ' ' || *ptr == '\t')) ++ptr;
    if (ec != std::errc{} || ptr != last)
        throw std::invalid_argument("line " + std::to_string(line_no) +
                                    ": cannot parse number '" + s + "'");
    return v;
}

struct RawTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

RawTable read_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open '" + path.string() + "'");
    RawTable t;
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("'" + path.string() + "' is empty");
    t.header = split_line(strip_cr(line));
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        auto fields = split_line(line);
        if (fields.size() != t.header.size())
            throw std::invalid_argument(path.string() + ": line " + std::to_string(line_no) +
                                        " has " + std::to_string(fields.size()) +
                                        " fields, expected " + std::to_string(t.header.size()));
        std::vector<double> row(fields.size());
        for (std::size_t i = 0; i < fields.size(); ++i) row[i] = parse_double(fields[i], line_no);
        t.rows.push_back(std::move(row));
    }
    return t;
}

bool has_label_column(const RawTable& t) {
    return !t.header.empty() && t.header.back() == "label";
}

std::vector<int> extract_labels(const RawTable& t, const std::filesystem::path& path) {
    std::vector<int> labels(t.rows.size());
    const std::size_t c = t.header.size() - 1;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const double v = t.rows[r][c];
        if (v != 0.0 && v != 1.0)
            throw std::invalid_argument(path.string() + ": label values must be 0 or 1");
        labels[r] = static_cast<int>(v);
    }
    return labels;
}

Matrix extract_values(const RawTable& t, std::size_t ncols) {
    Matrix m(t.rows.size(), ncols);
    for (std::size_t r = 0; r < t.rows.size(); ++r)
        for (std::size_t c = 0; c < ncols; ++c) m(r, c) = t.rows[r][c];
    return m;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

LabeledDataset read_dataset_csv(const std::filesystem::path& path) {
    RawTable t = read_table(path);
    const bool labeled = has_label_column(t);
    const std::size_t d = t.header.size() - (labeled ? 1 : 0);
    if (d == 0) throw std::invalid_argument(path.string() + ": no feature columns");
    std::vector<int> labels;
    if (labeled) labels = extract_labels(t, path);
    return make_dataset(extract_values(t, d), std::move(labels), path.stem().string());
}

void write_dataset_csv(const std::filesystem::path& path, const LabeledDataset& ds) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    for (std::size_t c = 0; c < ds.dims(); ++c) {
        if (c) out << ',';
        out << 'f' << (c + 1);
    }
    if (ds.has_labels()) out << ",label";
    out << '\n';
    for (std::size_t r = 0; r < ds.size(); ++r) {
        for (std::size_t c = 0; c < ds.dims(); ++c) {
            if (c) out << ',';
            out << format_double(ds.features(r, c));
        }
        if (ds.has_labels()) out << ',' << ds.labels[r];
        out << '\n';
    }
}

ScoresFile read_scores_csv(const std::filesystem::path& path) {
    RawTable t = read_table(path);
    const bool labeled = has_label_column(t);
    const std::size_t n = t.header.size() - (labeled ? 1 : 0);
    if (n == 0) throw std::invalid_argument(path.string() + ": no detector columns");
    std::vector<std::string> names(t.header.begin(), t.header.begin() + n);
    std::vector<int> labels;
    if (labeled) labels = extract_labels(t, path);
    return ScoresFile{make_score_matrix(extract_values(t, n), std::move(names)),
                      std::move(labels)};
}

void write_scores_csv(const std::filesystem::path& path, const ScoreMatrix& m,
                      const std::vector<int>& labels) {
    if (!labels.empty() && labels.size() != m.n_observations())
        throw std::invalid_argument("label count does not match score rows");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    for (std::size_t c = 0; c < m.detector_names.size(); ++c) {
        if (c) out << ',';
        out << m.detector_names[c];
    }
    if (!labels.empty()) out << ",label";
    out << '\n';
    for (std::size_t r = 0; r < m.n_observations(); ++r) {
        for (std::size_t c = 0; c < m.n_detectors(); ++c) {
            if (c) out << ',';
            out << format_double(m.scores(r, c));
        }
        if (!labels.empty()) out << ',' << labels[r];
        out << '\n';
    }
}

void write_ensemble_csv(const std::filesystem::path& path,
                        const std::vector<EnsembleResult>& results) {
    if (results.empty()) throw std::invalid_argument("no ensemble results to write");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    for (std::size_t c = 0; c < results.size(); ++c) {
        if (c) out << ',';
        out << results[c].method;
    }
    out << '\n';
    const std::size_t n = results.front().scores.size();
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < results.size(); ++c) {
            if (c) out << ',';
            out << format_double(results[c].scores[r]);
        }
        out << '\n';
    }
}

}  // namespace irtens
