#pragma once

#include "surfcalc/cli/scenario.hpp"
#include "surfcalc/identities/report.hpp"

#include <iomanip>
#include <map>
#include <sstream>
#include <ostream>

namespace surfcalc::cli {

namespace detail {

inline std::string short_number(double x) {
    std::ostringstream s;
    s.imbue(std::locale::classic());
    s << std::setprecision(6) << x;
    return s.str();
}

inline void print_params(std::ostream& os, const std::vector<ParamSchema>& params) {
    for (const auto& p : params)
        os << "      " << std::left << std::setw(14) << p.name << " default " << std::setw(10) << short_number(p.default_value) << ' '
           << p.description << '\n';
}

}  // namespace detail

/// Names and parameter schemas of every catalog entry a scenario can reference.
inline void list_catalog(std::ostream& os) {
    os << "surfaces (surface.name, surface.params):\n";
    for (const auto& e : surfaces::catalog()) {
        os << "  " << e.name << ": " << e.description << '\n';
        detail::print_params(os, e.params);
    }
    os << "scalar fields (fields.sigma, theta, concentration, density, test_function, weight):\n";
    for (const auto& e : fields::scalar_catalog()) os << "  " << e.name << ": " << e.description << '\n';
    os << "vector fields (fields.velocity, force, divergence_field):\n";
    for (const auto& e : fields::vector_catalog()) os << "  " << e.name << ": " << e.description << '\n';
    os << "constitutive sets (constitutive.name, constitutive.params):\n";
    for (const auto& e : constitutive::catalog()) {
        os << "  " << e.name << ": " << e.description << '\n';
        detail::print_params(os, e.params);
    }
    os << "pressure laws (constitutive.pressure.name, constitutive.pressure.params):\n";
    for (const auto& e : constitutive::pressure_catalog()) {
        os << "  " << e.name << ": " << e.description << '\n';
        detail::print_params(os, e.params);
    }
    os << "suites (suites.<name>: true):\n";
    for (Suite s : all_suites) os << "  " << to_string(s) << ": " << suite_description(s) << '\n';
    os << "boundary modes (bc_mode): no-slip, stress-free\n";
    os << "time-step policies (time_step.policy): cfl (cfl), fixed (dt), scaled (factor)\n";
}

/// Convergence table of a check CSV: one block per check name, rows by decreasing h, with
/// the observed order log2(e_coarse / e_fine) for halved spacing.
inline void print_orders(std::ostream& os, const std::vector<CheckRow>& rows) {
    std::vector<std::string> names;
    std::map<std::string, std::vector<CheckRow>> by_name;
    for (const auto& r : rows) {
        if (!by_name.count(r.name)) names.push_back(r.name);
        by_name[r.name].push_back(r);
    }
    auto cell = [](double x) {
        std::ostringstream s;
        s.imbue(std::locale::classic());
        if (std::isnan(x)) s << "-";
        else s << std::scientific << std::setprecision(3) << x;
        return s.str();
    };
    auto order_cell = [](double x) {
        std::ostringstream s;
        s.imbue(std::locale::classic());
        if (std::isnan(x)) s << "-";
        else s << std::fixed << std::setprecision(2) << x;
        return s.str();
    };
    for (const auto& name : names) {
        auto seq = by_name[name];
        std::stable_sort(seq.begin(), seq.end(), [](const CheckRow& a, const CheckRow& b) { return a.h > b.h; });
        os << name << '\n';
        os << "  " << std::left << std::setw(12) << "h" << std::setw(12) << "|residual|" << std::setw(12) << "relative" << "order\n";
        for (std::size_t q = 0; q < seq.size(); ++q) {
            const double order = q == 0 ? std::numeric_limits<double>::quiet_NaN()
                                        : observed_order(seq[q - 1].abs_residual, seq[q].abs_residual, seq[q - 1].h, seq[q].h);
            os << "  " << std::setw(12) << cell(seq[q].h) << std::setw(12) << cell(seq[q].abs_residual) << std::setw(12)
               << cell(seq[q].rel_residual) << order_cell(order) << '\n';
        }
    }
}

}  // namespace surfcalc::cli
