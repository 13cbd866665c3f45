#include "dppost/csv_io.hpp"

#include "dppost/errors.hpp"
#include "dppost/format.hpp"

#include <array>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

namespace dppost {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    for (auto& f : fields) {
        const auto b = f.find_first_not_of(" \t");
        const auto e = f.find_last_not_of(" \t");
        f = b == std::string::npos ? std::string() : f.substr(b, e - b + 1);
    }
    return fields;
}

bool blank(const std::string& line) { return line.find_first_not_of(" \t\r") == std::string::npos; }

struct Table {
    std::size_t stratum_col = 0;
    std::array<std::size_t, 3> value_cols{};
    std::size_t width = 0;
};

Table locate_columns(const std::vector<std::string>& header, const char* const (&names)[3],
                     const std::string& source) {
    Table t;
    t.width = header.size();
    auto find = [&](const std::string& name) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) {
                return i;
            }
        }
        throw SchemaError(source + ": line 1: missing column '" + name + "'");
    };
    t.stratum_col = find("stratum");
    for (std::size_t k = 0; k < 3; ++k) {
        t.value_cols[k] = find(names[k]);
    }
    return t;
}

double parse_real(const std::string& text, const std::string& source, std::size_t line, const std::string& column) {
    const std::string where = source + ": line " + std::to_string(line) + ", column '" + column + "'";
    if (text.empty()) {
        throw SchemaError(where + ": empty value");
    }
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(v)) {
        throw SchemaError(where + ": not a finite number: '" + text + "'");
    }
    return v;
}

// Calls fn(stratum, values, line) for every data row.
template <typename Fn>
void for_each_row(std::istream& in, const char* const (&names)[3], const std::string& source, Fn fn) {
    std::string line;
    std::size_t line_no = 0;
    std::optional<Table> table;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) {
            continue;
        }
        const auto fields = split_line(line);
        if (!table) {
            table = locate_columns(fields, names, source);
            continue;
        }
        if (fields.size() != table->width) {
            throw SchemaError(source + ": line " + std::to_string(line_no) + ": expected " +
                              std::to_string(table->width) + " fields, found " + std::to_string(fields.size()));
        }
        const std::string& stratum = fields[table->stratum_col];
        if (stratum.empty()) {
            throw SchemaError(source + ": line " + std::to_string(line_no) + ", column 'stratum': empty key");
        }
        std::vector<double> values(3);
        for (std::size_t k = 0; k < 3; ++k) {
            values[k] = parse_real(fields[table->value_cols[k]], source, line_no, names[k]);
        }
        fn(stratum, std::move(values), line_no);
    }
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw SchemaError("cannot open '" + path + "'");
    }
    return in;
}

}  // namespace

std::vector<Tabulation> read_truth_csv(std::istream& in, const std::string& source) {
    std::vector<Tabulation> out;
    const std::vector<std::string> labels(std::begin(kTruthColumns), std::end(kTruthColumns));
    for_each_row(in, kTruthColumns, source, [&](const std::string& stratum, std::vector<double> values, std::size_t) {
        out.emplace_back(std::move(values), labels, stratum);
    });
    return out;
}

std::vector<Tabulation> read_truth_csv(const std::string& path) {
    auto in = open_input(path);
    return read_truth_csv(in, path);
}

std::vector<NoisyMeasurement> read_noisy_csv(std::istream& in, const MechanismSpec& mechanism,
                                             const std::string& source) {
    std::vector<NoisyMeasurement> out;
    for_each_row(in, kNoisyColumns, source, [&](const std::string& stratum, std::vector<double> values, std::size_t) {
        out.emplace_back(std::move(values), mechanism, stratum);
    });
    return out;
}

std::vector<NoisyMeasurement> read_noisy_csv(const std::string& path, const MechanismSpec& mechanism) {
    auto in = open_input(path);
    return read_noisy_csv(in, mechanism, path);
}

std::vector<PublishedRatios> read_ratio_csv(std::istream& in, const std::string& source) {
    std::vector<PublishedRatios> out;
    for_each_row(in, kRatioColumns, source, [&](const std::string& stratum, std::vector<double> v, std::size_t) {
        out.push_back({stratum, RatioTriple{v[0], v[1], v[2], false}});
    });
    return out;
}

std::vector<PublishedRatios> read_ratio_csv(const std::string& path) {
    auto in = open_input(path);
    return read_ratio_csv(in, path);
}

void write_truth_csv(std::ostream& out, const std::vector<Tabulation>& rows) {
    out << "stratum," << kTruthColumns[0] << ',' << kTruthColumns[1] << ',' << kTruthColumns[2] << '\n';
    for (const auto& t : rows) {
        out << t.stratum();
        for (double v : t.values()) {
            out << ',' << format_exact(v);
        }
        out << '\n';
    }
}

void write_noisy_csv(std::ostream& out, const std::vector<NoisyMeasurement>& rows) {
    out << "stratum," << kNoisyColumns[0] << ',' << kNoisyColumns[1] << ',' << kNoisyColumns[2] << '\n';
    for (const auto& z : rows) {
        out << z.stratum();
        for (double v : z.values()) {
            out << ',' << format_exact(v);
        }
        out << '\n';
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write '" + path + "'");
    }
    out << text;
    if (!out) {
        throw std::runtime_error("write failed for '" + path + "'");
    }
}

}  // namespace dppost
