#include "aben/data.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

namespace aben {

namespace {

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_number(const std::string& cell, std::size_t line_no) {
    if (cell.empty()) {
        throw MalformedCsv("empty cell at line " + std::to_string(line_no));
    }
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end != cell.c_str() + cell.size() || !std::isfinite(v)) {
        throw MalformedCsv("non-numeric cell '" + cell + "' at line " + std::to_string(line_no));
    }
    return v;
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void ProjectTable::validate() const {
    if (rows.empty()) throw EmptyDataset(name + ": no rows");
    if (feature_names.empty()) throw MalformedCsv(name + ": no feature columns");
    if (rows.size() < 6) throw DatasetTooSmall(name + ": fewer than 6 rows");
    if (effort.size() != rows.size()) {
        throw MalformedCsv(name + ": effort length does not match row count");
    }
    for (const auto& row : rows) {
        if (row.size() != feature_names.size()) {
            throw MalformedCsv(name + ": row arity mismatch");
        }
    }
    for (double e : effort) {
        if (!(e > 0.0)) throw NonPositiveEffort(name + ": effort value must be positive");
    }
}

ProjectTable parse_csv(const std::string& text, const std::string& name) {
    std::stringstream ss(text);
    std::string line;
    if (!std::getline(ss, line)) throw EmptyDataset(name + ": empty file");
    const auto header = split_line(line);
    if (header.empty()) throw MalformedCsv(name + ": empty header");

    std::size_t effort_col = header.size() - 1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (lower(header[i]) == "effort") {
            effort_col = i;
            break;
        }
    }

    ProjectTable table;
    table.name = name;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i != effort_col) table.feature_names.push_back(header[i]);
    }

    std::size_t line_no = 1;
    while (std::getline(ss, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split_line(line);
        if (cells.size() != header.size()) {
            throw MalformedCsv(name + ": row arity mismatch at line " + std::to_string(line_no));
        }
        std::vector<double> row;
        row.reserve(header.size() - 1);
        for (std::size_t i = 0; i < cells.size(); ++i) {
            const double v = parse_number(cells[i], line_no);
            if (i == effort_col) {
                table.effort.push_back(v);
            } else {
                row.push_back(v);
            }
        }
        table.rows.push_back(std::move(row));
    }
    table.validate();
    return table;
}

ProjectTable load_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    std::string name = path;
    if (const auto slash = name.find_last_of('/'); slash != std::string::npos) {
        name = name.substr(slash + 1);
    }
    if (const auto dot = name.find_last_of('.'); dot != std::string::npos) {
        name = name.substr(0, dot);
    }
    return parse_csv(buffer.str(), name);
}

std::string write_csv(const ProjectTable& table) {
    std::string out;
    for (const auto& fn : table.feature_names) {
        out += fn;
        out += ',';
    }
    out += "effort\n";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        for (double v : table.rows[r]) {
            out += format_number(v);
            out += ',';
        }
        out += format_number(table.effort[r]);
        out += '\n';
    }
    return out;
}

std::pair<ProjectTable, NormalizationSpec> normalize(const ProjectTable& table) {
    NormalizationSpec spec;
    const std::size_t cols = table.feature_count();
    spec.mins.assign(cols, 0.0);
    spec.maxs.assign(cols, 0.0);
    for (std::size_t c = 0; c < cols; ++c) {
        double lo = table.rows[0][c];
        double hi = lo;
        for (const auto& row : table.rows) {
            lo = std::min(lo, row[c]);
            hi = std::max(hi, row[c]);
        }
        spec.mins[c] = lo;
        spec.maxs[c] = hi;
    }
    ProjectTable out = table;
    for (auto& row : out.rows) {
        for (std::size_t c = 0; c < cols; ++c) {
            row[c] = normalize_value(spec, c, row[c]);
        }
    }
    return {std::move(out), std::move(spec)};
}

double normalize_value(const NormalizationSpec& spec, std::size_t column, double value) {
    const double lo = spec.mins[column];
    const double hi = spec.maxs[column];
    if (hi <= lo) return 0.0;  // constant column stays inert
    const double v = (value - lo) / (hi - lo);
    return std::clamp(v, 0.0, 1.0);
}

DiscretizedColumn discretize(const std::vector<double>& column,
                             DiscretizePolicy policy,
                             std::size_t bins) {
    if (column.empty()) throw EmptyInput("discretize: empty column");
    if (policy != DiscretizePolicy::None && bins < 2) {
        throw AbenError("discretize: bins must be >= 2");
    }
    DiscretizedColumn out;
    out.policy = policy;
    out.bin_count = bins;
    if (policy == DiscretizePolicy::None) return out;

    const std::size_t n = column.size();
    out.bin_labels.assign(n, 0);
    if (policy == DiscretizePolicy::EqualWidth) {
        const auto [lo_it, hi_it] = std::minmax_element(column.begin(), column.end());
        const double lo = *lo_it;
        const double hi = *hi_it;
        if (hi <= lo) return out;  // degenerate range: everything in bin 0
        const double width = (hi - lo) / static_cast<double>(bins);
        for (std::size_t i = 0; i < n; ++i) {
            auto label = static_cast<std::size_t>((column[i] - lo) / width);
            out.bin_labels[i] = std::min(label, bins - 1);
        }
    } else {
        // Stable sort keeps duplicate values in original row order.
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return column[a] < column[b]; });
        const std::size_t run = (n + bins - 1) / bins;
        for (std::size_t pos = 0; pos < n; ++pos) {
            out.bin_labels[order[pos]] = std::min(pos / run, bins - 1);
        }
    }
    return out;
}

DiscretizedColumn effort_to_classes(const ProjectTable& table) {
    auto col = discretize(table.effort, DiscretizePolicy::EqualWidth, 10);
    col.source_column = table.feature_count();  // the dependent column
    return col;
}

FoldPlan make_folds(const ProjectTable& table, std::size_t repeats, std::uint64_t seed) {
    if (repeats < 1) throw AbenError("make_folds: repeats must be >= 1");
    const std::size_t n = table.row_count();
    FoldPlan plan;
    plan.dataset_size = n;
    plan.fold_count = n < 40 ? 3 : 10;
    plan.repeats = repeats;
    plan.seed = seed;
    if (n < plan.fold_count) throw DatasetTooSmall(table.name + ": fewer rows than folds");

    plan.assignments.resize(repeats);
    for (std::size_t rep = 0; rep < repeats; ++rep) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        Rng rng(derive_seed(seed, rep));
        rng.shuffle(order);
        auto& folds = plan.assignments[rep];
        folds.assign(plan.fold_count, {});
        for (std::size_t i = 0; i < n; ++i) {
            folds[i % plan.fold_count].push_back(order[i]);
        }
    }
    return plan;
}

std::string fold_plan_csv(const FoldPlan& plan) {
    std::string out = "repeat,fold,row_index\n";
    for (std::size_t rep = 0; rep < plan.assignments.size(); ++rep) {
        for (std::size_t fold = 0; fold < plan.assignments[rep].size(); ++fold) {
            for (std::size_t idx : plan.assignments[rep][fold]) {
                out += std::to_string(rep) + ',' + std::to_string(fold) + ',' +
                       std::to_string(idx) + '\n';
            }
        }
    }
    return out;
}

ProjectTable select_rows(const ProjectTable& table, const std::vector<std::size_t>& indices) {
    ProjectTable out;
    out.name = table.name;
    out.feature_names = table.feature_names;
    out.rows.reserve(indices.size());
    out.effort.reserve(indices.size());
    for (std::size_t idx : indices) {
        out.rows.push_back(table.rows[idx]);
        out.effort.push_back(table.effort[idx]);
    }
    return out;
}

std::pair<ProjectTable, ProjectTable> split_train_tune(const ProjectTable& train_rows,
                                                       std::uint64_t seed) {
    const std::size_t n = train_rows.row_count();
    if (n < 4) throw DatasetTooSmall(train_rows.name + ": too few rows to split");
    const std::size_t tune_count = n / 3;

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    rng.shuffle(order);

    std::vector<std::size_t> tune_idx(order.begin(), order.begin() + tune_count);
    std::vector<std::size_t> train_idx(order.begin() + tune_count, order.end());
    std::sort(tune_idx.begin(), tune_idx.end());
    std::sort(train_idx.begin(), train_idx.end());
    return {select_rows(train_rows, train_idx), select_rows(train_rows, tune_idx)};
}

}  // namespace aben
