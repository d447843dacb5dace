#pragma once

#include <string>

#include "sapred/csv.hpp"
#include "sapred/types.hpp"

namespace sapred {

// Feature matrices travel as CSV with canonical FeatureKey column headers;
// missing values are empty fields.
inline void write_feature_matrix_csv(const std::string& path, const FeatureMatrix& m) {
    std::string out = "participant,trial";
    for (const auto& k : m.columns) {
        out += ',';
        out += k.str();
    }
    out += '\n';
    for (std::size_t r = 0; r < m.n_rows(); ++r) {
        out += csv_quote(m.rows[r].participant);
        out += ',';
        out += std::to_string(m.rows[r].trial);
        for (std::size_t c = 0; c < m.n_cols(); ++c) {
            out += ',';
            if (!is_missing(m.values[r][c])) out += format_double(m.values[r][c]);
        }
        out += '\n';
    }
    write_file(path, out);
}

inline FeatureMatrix read_feature_matrix_csv(const std::string& path) {
    std::string content = read_file(path);
    FeatureMatrix m;
    bool header_done = false;
    for_each_line(content, [&](std::size_t lineno, std::string_view line) {
        auto fields = split_csv_line(line);
        if (!header_done) {
            if (fields.size() < 2 || fields[0] != "participant" || fields[1] != "trial")
                throw Error(path + ": header must start with participant,trial");
            for (std::size_t i = 2; i < fields.size(); ++i)
                m.columns.push_back(FeatureKey::parse(fields[i]));
            header_done = true;
            return;
        }
        if (fields.size() != m.columns.size() + 2)
            throw Error(path + ": wrong column count at line " + std::to_string(lineno));
        RowId row;
        row.participant = fields[0];
        row.trial = static_cast<int>(parse_long(fields[1], path));
        m.rows.push_back(row);
        std::vector<double> vals(m.columns.size());
        for (std::size_t i = 0; i < m.columns.size(); ++i) {
            const std::string& f = fields[i + 2];
            vals[i] = f.empty() ? missing_value()
                                : parse_double(f, path + " line " + std::to_string(lineno));
        }
        m.values.push_back(std::move(vals));
    });
    return m;
}

}  // namespace sapred
