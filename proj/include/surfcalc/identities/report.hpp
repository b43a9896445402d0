#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <locale>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace surfcalc {

/// One residual of an identity check at one resolution.
struct CheckRow {
    std::string name;
    double h = 0.0;
    double dt = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double abs_residual = 0.0;
    double rel_residual = 0.0;
    double observed_order = std::numeric_limits<double>::quiet_NaN();
};

inline double relative_residual(double lhs, double rhs) {
    return std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1.0});
}

inline CheckRow make_row(std::string name, double h, double dt, double lhs, double rhs) {
    CheckRow r;
    r.name = std::move(name);
    r.h = h;
    r.dt = dt;
    r.lhs = lhs;
    r.rhs = rhs;
    r.abs_residual = std::abs(lhs - rhs);
    r.rel_residual = relative_residual(lhs, rhs);
    return r;
}

/// log(e1 / e2) / log(h1 / h2).
inline double observed_order(double e1, double e2, double h1, double h2) {
    if (!(e1 > 0.0) || !(e2 > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    return std::log(e1 / e2) / std::log(h1 / h2);
}

/// Fills observed_order of every row from the next coarser row with the same name (rows of a
/// name are ordered by decreasing h). The coarsest row keeps NaN.
inline void assign_orders(std::vector<CheckRow>& rows) {
    std::map<std::string, std::vector<std::size_t>> by_name;
    for (std::size_t i = 0; i < rows.size(); ++i) by_name[rows[i].name].push_back(i);
    for (auto& [name, idx] : by_name) {
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return rows[a].h > rows[b].h; });
        for (std::size_t q = 1; q < idx.size(); ++q) {
            const auto& c = rows[idx[q - 1]];
            auto& f = rows[idx[q]];
            f.observed_order = observed_order(c.abs_residual, f.abs_residual, c.h, f.h);
        }
    }
}

/// Orders between consecutive entries of a refinement sequence.
inline std::vector<double> observed_orders(const std::vector<double>& errors, const std::vector<double>& h) {
    std::vector<double> out;
    for (std::size_t i = 1; i < errors.size() && i < h.size(); ++i) out.push_back(observed_order(errors[i - 1], errors[i], h[i - 1], h[i]));
    return out;
}

/// 17 significant digits, '.' separator regardless of locale.
inline std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(17);
    os << x;
    return os.str();
}

inline const char* check_csv_header() { return "name,h,dt,lhs,rhs,abs_residual,rel_residual,observed_order"; }

inline void write_check_csv(std::ostream& os, const std::vector<CheckRow>& rows) {
    os << check_csv_header() << '\n';
    for (const auto& r : rows)
        os << r.name << ',' << format_number(r.h) << ',' << format_number(r.dt) << ',' << format_number(r.lhs) << ','
           << format_number(r.rhs) << ',' << format_number(r.abs_residual) << ',' << format_number(r.rel_residual) << ','
           << format_number(r.observed_order) << '\n';
}

inline void write_check_csv(const std::string& path, const std::vector<CheckRow>& rows) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path);
    write_check_csv(os, rows);
}

/// Parses a file written by write_check_csv.
inline std::vector<CheckRow> read_check_csv(std::istream& is) {
    std::vector<CheckRow> rows;
    std::string line;
    if (!std::getline(is, line)) return rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 8) throw std::runtime_error("malformed report line: " + line);
        auto num = [](const std::string& s) {
            std::istringstream in(s);
            in.imbue(std::locale::classic());
            double x = std::numeric_limits<double>::quiet_NaN();
            if (s != "nan") in >> x;
            return x;
        };
        CheckRow r;
        r.name = cells[0];
        r.h = num(cells[1]);
        r.dt = num(cells[2]);
        r.lhs = num(cells[3]);
        r.rhs = num(cells[4]);
        r.abs_residual = num(cells[5]);
        r.rel_residual = num(cells[6]);
        r.observed_order = num(cells[7]);
        rows.push_back(r);
    }
    return rows;
}

}  // namespace surfcalc
