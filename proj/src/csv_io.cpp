#include "mdfit/csv_io.hpp"

#include "mdfit/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace mdfit {

namespace {

using Row = std::vector<std::string>;

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) { return {}; }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// One CSV record; double quotes group commas and "" is a literal quote.
Row split_record(const std::string& line)
{
    Row out;
    std::string cell;
    bool quoted = false;
    for (std::size_t k = 0; k < line.size(); ++k) {
        const char ch = line[k];
        if (quoted) {
            if (ch == '"' && k + 1 < line.size() && line[k + 1] == '"') {
                cell += '"';
                ++k;
            } else if (ch == '"') {
                quoted = false;
            } else {
                cell += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            out.push_back(trim(cell));
            cell.clear();
        } else {
            cell += ch;
        }
    }
    out.push_back(trim(cell));
    return out;
}

std::vector<Row> read_csv(const std::filesystem::path& path)
{
    std::istringstream in(read_text(path));
    std::vector<Row> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) { continue; }
        rows.push_back(split_record(line));
    }
    if (rows.empty()) { throw InputError(path.string() + ": file is empty"); }
    return rows;
}

std::string where(const std::filesystem::path& path, std::size_t row, std::size_t col)
{
    std::ostringstream os;
    os << path.string() << ": row " << row + 1 << ", column " << col + 1;
    return os.str();
}

double parse_number(const std::string& cell, const std::filesystem::path& path, std::size_t row,
                    std::size_t col)
{
    const char* first = cell.data();
    const char* last = first + cell.size();
    if (first != last && *first == '+') { ++first; }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (cell.empty() || ec != std::errc() || ptr != last) {
        throw InputError(where(path, row, col) + ": not a number: '" + cell + "'");
    }
    if (!std::isfinite(v)) { throw InputError(where(path, row, col) + ": non-finite value"); }
    return v;
}

struct LabeledTable {
    std::vector<std::string> header; // without the label column
    std::vector<std::string> labels;
    Matrix values;
};

LabeledTable read_labeled_table(const std::filesystem::path& path)
{
    const auto rows = read_csv(path);
    LabeledTable t;
    const Row& head = rows.front();
    if (head.size() < 2) { throw InputError(path.string() + ": header needs a label column and at least one value column"); }
    t.header.assign(head.begin() + 1, head.end());
    const std::size_t ncol = head.size();
    t.values.resize(static_cast<Eigen::Index>(rows.size() - 1), static_cast<Eigen::Index>(ncol - 1));
    std::set<std::string> seen;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const Row& row = rows[r];
        if (row.size() != ncol) {
            std::ostringstream os;
            os << path.string() << ": row " << r + 1 << " has " << row.size()
               << " cells, expected " << ncol;
            throw InputError(os.str());
        }
        if (row[0].empty()) { throw InputError(where(path, r, 0) + ": empty label"); }
        if (!seen.insert(row[0]).second) {
            throw InputError(where(path, r, 0) + ": duplicate label '" + row[0] + "'");
        }
        t.labels.push_back(row[0]);
        for (std::size_t c = 1; c < ncol; ++c) {
            t.values(static_cast<Eigen::Index>(r - 1), static_cast<Eigen::Index>(c - 1)) =
                parse_number(row[c], path, r, c);
        }
    }
    return t;
}

std::string csv_cell(const std::string& s)
{
    if (s.find_first_of(",\"") == std::string::npos) { return s; }
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') { out += '"'; }
        out += ch;
    }
    return out + "\"";
}

// Permutation taking file rows to the target's label order.
std::vector<int> align_labels(const std::vector<std::string>& file_labels,
                              const std::vector<std::string>& target_labels,
                              const std::filesystem::path& path)
{
    if (file_labels.size() != target_labels.size()) {
        std::ostringstream os;
        os << path.string() << ": " << file_labels.size() << " points, target has "
           << target_labels.size();
        throw InputError(os.str());
    }
    std::map<std::string, int> index;
    for (std::size_t k = 0; k < file_labels.size(); ++k) {
        index[file_labels[k]] = static_cast<int>(k);
    }
    std::vector<int> perm;
    for (const auto& lab : target_labels) {
        const auto it = index.find(lab);
        if (it == index.end()) { throw InputError(path.string() + ": no row for target point '" + lab + "'"); }
        perm.push_back(it->second);
    }
    return perm;
}

} // namespace

std::string read_text(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) { throw InputError("cannot open " + path.string()); }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    if (path.has_parent_path()) { std::filesystem::create_directories(path.parent_path()); }
    std::ofstream out(path, std::ios::binary);
    if (!out) { throw InputError("cannot write " + path.string()); }
    out << text;
    if (!out) { throw InputError("write failed for " + path.string()); }
}

std::string round_trip(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

Configuration load_target(const std::filesystem::path& path)
{
    LabeledTable t = read_labeled_table(path);
    Configuration cfg(std::move(t.values), std::move(t.labels), std::move(t.header));
    cfg.validate();
    return cfg;
}

void save_target(const std::filesystem::path& path, const Configuration& cfg)
{
    std::ostringstream os;
    os << "label";
    for (const auto& a : cfg.attr_names) { os << ',' << csv_cell(a); }
    os << '\n';
    for (int i = 0; i < cfg.n(); ++i) {
        os << csv_cell(cfg.labels[static_cast<std::size_t>(i)]);
        for (int k = 0; k < cfg.p(); ++k) { os << ',' << round_trip(cfg.coords(i, k)); }
        os << '\n';
    }
    write_text(path, os.str());
}

DistanceMatrix load_reference(const std::filesystem::path& path, ReferenceMode mode,
                              const Configuration* target)
{
    LabeledTable t = read_labeled_table(path);
    Matrix d;
    if (mode == ReferenceMode::Distances) {
        if (t.values.rows() != t.values.cols()) {
            throw InputError(path.string() + ": distance matrix is not square");
        }
        if (t.header != t.labels) {
            throw InputError(path.string() + ": column labels must repeat the row labels");
        }
        d = t.values;
    } else {
        d = pairwise_distances(Configuration(t.values, t.labels, t.header)).values();
    }
    if (target != nullptr) {
        const auto perm = align_labels(t.labels, target->labels, path);
        Matrix re(d.rows(), d.cols());
        for (Eigen::Index i = 0; i < d.rows(); ++i) {
            for (Eigen::Index j = 0; j < d.cols(); ++j) {
                re(i, j) = d(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
            }
        }
        d = std::move(re);
    }
    return DistanceMatrix(std::move(d), 1e-9);
}

void save_distances(const std::filesystem::path& path, const DistanceMatrix& D,
                    const std::vector<std::string>& labels)
{
    detail::require(static_cast<int>(labels.size()) == D.n(), "one label per point required");
    std::ostringstream os;
    os << "label";
    for (const auto& l : labels) { os << ',' << csv_cell(l); }
    os << '\n';
    for (int i = 0; i < D.n(); ++i) {
        os << csv_cell(labels[static_cast<std::size_t>(i)]);
        for (int j = 0; j < D.n(); ++j) { os << ',' << round_trip(D(i, j)); }
        os << '\n';
    }
    write_text(path, os.str());
}

CategoryMap load_category_map(const std::filesystem::path& path)
{
    const auto rows = read_csv(path);
    if (rows.front().size() != 2 || rows.front()[0] != "attribute" || rows.front()[1] != "category") {
        throw InputError(path.string() + ": header must be 'attribute,category'");
    }
    CategoryMap map;
    std::set<std::string> seen;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const Row& row = rows[r];
        if (row.size() != 2 || row[0].empty() || row[1].empty()) {
            throw InputError(where(path, r, 0) + ": expected 'attribute,category'");
        }
        if (!seen.insert(row[0]).second) {
            throw InputError(where(path, r, 0) + ": attribute '" + row[0] + "' mapped twice");
        }
        map.entries.emplace_back(row[0], row[1]);
    }
    return map;
}

std::vector<std::string> CategoryMap::categories() const
{
    std::vector<std::string> out;
    for (const auto& [attr, cat] : entries) {
        if (std::find(out.begin(), out.end(), cat) == out.end()) { out.push_back(cat); }
    }
    return out;
}

const std::string& CategoryMap::category_of(const std::string& attribute) const
{
    for (const auto& [attr, cat] : entries) {
        if (attr == attribute) { return cat; }
    }
    throw InputError("attribute '" + attribute + "' has no category");
}

void check_category_map(const CategoryMap& map, const std::vector<std::string>& attrs)
{
    for (const auto& a : attrs) { (void)map.category_of(a); }
    for (const auto& [attr, cat] : map.entries) {
        if (std::find(attrs.begin(), attrs.end(), attr) == attrs.end()) {
            throw InputError("category map names unknown attribute '" + attr + "'");
        }
    }
}

} // namespace mdfit
