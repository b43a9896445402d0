#pragma once

#include "surfcalc/geometry/flow_map.hpp"

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace surfcalc {

/// A C^1 energy density of a nonnegative argument together with its derivative.
struct EnergyDensity {
    std::function<double(double)> value;
    std::function<double(double)> derivative;

    double operator()(double r) const { return value(r); }
    double d(double r) const { return derivative(r); }
};

/// Pressure law p(rho) with p' and p''. The effective pressure is rho p' - p.
struct PressureLaw {
    std::string name;
    std::function<double(double)> p;
    std::function<double(double)> dp;
    std::function<double(double)> d2p;

    double effective(double rho) const { return rho * dp(rho) - p(rho); }
    /// Square of the acoustic speed, d(effective)/d rho = rho p''.
    double sound_speed2(double rho) const { return rho * d2p(rho); }
};

/// The four energy densities e1..e4 (shear, dilatation, heat, diffusion) and a pressure law.
struct ConstitutiveSet {
    std::string name;
    std::array<EnergyDensity, 4> e;
    PressureLaw pressure;

    const EnergyDensity& e1() const { return e[0]; }
    const EnergyDensity& e2() const { return e[1]; }
    const EnergyDensity& e3() const { return e[2]; }
    const EnergyDensity& e4() const { return e[3]; }

    /// True when every e_j' is nonnegative on [0, r_max] (sampled).
    bool dissipative(double r_max = 50.0, int samples = 2001) const {
        for (int s = 0; s < samples; ++s) {
            const double r = r_max * s / (samples - 1);
            for (const auto& ej : e)
                if (ej.d(r) < 0.0) return false;
        }
        return true;
    }
};

namespace laws {

inline EnergyDensity linear(double mu) {
    return {[mu](double r) { return mu * r; }, [mu](double) { return mu; }};
}

/// mu (r + beta r^2 / 2): derivative grows with the rate.
inline EnergyDensity thickening(double mu, double beta) {
    return {[=](double r) { return mu * (r + 0.5 * beta * r * r); }, [=](double r) { return mu * (1.0 + beta * r); }};
}

/// Regularized power law 2 mu / (q + 1) (delta^2 + r)^((q + 1) / 2).
inline EnergyDensity power_law(double mu, double q, double delta) {
    const double d2 = delta * delta;
    return {[=](double r) { return 2.0 * mu / (q + 1.0) * std::pow(d2 + r, 0.5 * (q + 1.0)); },
            [=](double r) { return mu * std::pow(d2 + r, 0.5 * (q - 1.0)); }};
}

/// mu (r + log(1 + r)).
inline EnergyDensity log_mixed(double mu) {
    return {[=](double r) { return mu * (r + std::log1p(r)); }, [=](double r) { return mu * (1.0 + 1.0 / (1.0 + r)); }};
}

inline PressureLaw power_pressure(double kappa, double gamma) {
    return {"power",
            [=](double rho) { return kappa * std::pow(rho, gamma); },
            [=](double rho) { return kappa * gamma * std::pow(rho, gamma - 1.0); },
            [=](double rho) { return kappa * gamma * (gamma - 1.0) * std::pow(rho, gamma - 2.0); }};
}

inline PressureLaw quadratic_pressure(double kappa = 1.0) {
    return {"quadratic", [=](double rho) { return kappa * rho * rho; }, [=](double rho) { return 2.0 * kappa * rho; },
            [=](double) { return 2.0 * kappa; }};
}

inline PressureLaw zero_pressure() {
    return {"zero", [](double) { return 0.0; }, [](double) { return 0.0; }, [](double) { return 0.0; }};
}

}  // namespace laws

namespace constitutive {

/// Linear densities e_j(r) = mu_j r: the Boussinesq-Scriven stress.
inline ConstitutiveSet newtonian(double mu1 = 1.0, double mu2 = 0.5, double mu3 = 1.0, double mu4 = 1.0,
                                 PressureLaw p = laws::quadratic_pressure()) {
    return {"newtonian", {laws::linear(mu1), laws::linear(mu2), laws::linear(mu3), laws::linear(mu4)}, std::move(p)};
}

inline ConstitutiveSet shear_thickening(double mu = 1.0, double beta = 0.5, PressureLaw p = laws::quadratic_pressure()) {
    return {"shear-thickening",
            {laws::thickening(mu, beta), laws::thickening(0.5 * mu, beta), laws::thickening(mu, beta), laws::thickening(mu, beta)},
            std::move(p)};
}

inline ConstitutiveSet power_law(double mu = 1.0, double q = 0.6, double delta = 0.5, PressureLaw p = laws::quadratic_pressure()) {
    return {"power-law",
            {laws::power_law(mu, q, delta), laws::power_law(0.5 * mu, q, delta), laws::log_mixed(mu), laws::power_law(mu, q, delta)},
            std::move(p)};
}

/// Negative viscosity; not dissipative. Useful to exercise the dissipativity flag.
inline ConstitutiveSet anti_dissipative(double mu = 1.0) {
    return {"anti-dissipative", {laws::linear(-mu), laws::linear(mu), laws::linear(mu), laws::linear(mu)}, laws::quadratic_pressure()};
}

struct Entry {
    std::string name;
    std::string description;
    std::vector<ParamSchema> params;
    std::function<ConstitutiveSet(const ParamMap&)> make;
};

inline const std::vector<Entry>& catalog() {
    static const std::vector<Entry> entries = {
        {"newtonian",
         "e_j(r) = mu_j r (Boussinesq-Scriven)",
         {{"mu1", 1.0, "shear"}, {"mu2", 0.5, "dilatation"}, {"mu3", 1.0, "heat"}, {"mu4", 1.0, "diffusion"}},
         [](const ParamMap& p) {
             return newtonian(param_or(p, "mu1", 1.0), param_or(p, "mu2", 0.5), param_or(p, "mu3", 1.0), param_or(p, "mu4", 1.0));
         }},
        {"shear-thickening",
         "e_j(r) = mu_j (r + beta r^2 / 2)",
         {{"mu", 1.0, "base coefficient"}, {"beta", 0.5, "thickening rate"}},
         [](const ParamMap& p) { return shear_thickening(param_or(p, "mu", 1.0), param_or(p, "beta", 0.5)); }},
        {"power-law",
         "regularized power law for e1, e2, e4 and mu (r + log(1 + r)) for e3",
         {{"mu", 1.0, "coefficient"}, {"q", 0.6, "exponent"}, {"delta", 0.5, "regularization"}},
         [](const ParamMap& p) { return power_law(param_or(p, "mu", 1.0), param_or(p, "q", 0.6), param_or(p, "delta", 0.5)); }},
        {"anti-dissipative",
         "e1(r) = -mu r; fails the dissipativity check",
         {{"mu", 1.0, "coefficient"}},
         [](const ParamMap& p) { return anti_dissipative(param_or(p, "mu", 1.0)); }},
    };
    return entries;
}

struct PressureEntry {
    std::string name;
    std::string description;
    std::vector<ParamSchema> params;
    std::function<PressureLaw(const ParamMap&)> make;
};

inline const std::vector<PressureEntry>& pressure_catalog() {
    static const std::vector<PressureEntry> entries = {
        {"quadratic", "p = kappa rho^2", {{"kappa", 1.0, "coefficient"}},
         [](const ParamMap& p) { return laws::quadratic_pressure(param_or(p, "kappa", 1.0)); }},
        {"power", "p = kappa rho^gamma", {{"kappa", 1.0, "coefficient"}, {"gamma", 1.4, "exponent"}},
         [](const ParamMap& p) { return laws::power_pressure(param_or(p, "kappa", 1.0), param_or(p, "gamma", 1.4)); }},
        {"zero", "p = 0", {}, [](const ParamMap&) { return laws::zero_pressure(); }},
    };
    return entries;
}

}  // namespace constitutive
}  // namespace surfcalc
