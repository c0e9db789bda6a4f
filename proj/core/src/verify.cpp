#include "pjt/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "pjt/classical.hpp"
#include "pjt/config.hpp"
#include "pjt/hopping.hpp"
#include "pjt/model.hpp"

namespace pjt {

void Report::add(std::string name, double value, double limit) {
    checks.push_back({std::move(name), std::isfinite(value) && value <= limit, value, limit});
}

bool Report::ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check &c) { return c.pass; });
}

const Check *Report::first_failure() const {
    for (const Check &c : checks) {
        if (!c.pass) return &c;
    }
    return nullptr;
}

void Report::print(std::ostream &out) const {
    for (const Check &c : checks) {
        out << (c.pass ? "PASS " : "FAIL ") << c.name << " value=" << format_real(c.value)
            << " limit=" << format_real(c.limit) << '\n';
    }
}

Report verify_scattering(Complex z, const ScatteringSettings &settings) {
    Report r;
    const ScatteringMatrix s = analytic_s_matrix(z);
    r.add("analytic_unitarity", unitarity_defect(s), 1e-12);
    r.add("branching_consistency", branching_consistency(z), 1e-12);

    const double m12 = std::abs(s(0, 1));
    const double m13 = std::abs(s(0, 2));
    double sym = std::abs(m12 - std::abs(s(1, 0)));
    for (double other : {std::abs(s(1, 2)), std::abs(s(2, 0)), std::abs(s(2, 1))}) {
        sym = std::max(sym, std::abs(m13 - other));
    }
    r.add("modulus_symmetry", sym, 1e-12);

    if (std::abs(z) > 0.0) {
        const double lhs = std::norm(aux_b(z));
        const double rhs = (2.0 * std::exp(std::numbers::pi * std::norm(z) / 2.0) - 2.0) * std::norm(aux_a(z));
        r.add("aux_relation_rel", std::abs(lhs - rhs) / std::max(lhs, 1e-300), 1e-12);
    }

    const ScatteringMatrix num = numerical_s_matrix(z, settings);
    r.add("numerical_unitarity", unitarity_defect(num), 1e-8);
    r.add("numerical_vs_analytic", (num - s).cwiseAbs().maxCoeff(),
          1e-2 * std::max(1.0, std::norm(z)) * 200.0 / settings.s_max);
    return r;
}

Report verify_projectors(int n_points, std::uint64_t seed) {
    Report r;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    double idem = 0.0, complete = 0.0, ortho = 0.0, eigen = 0.0, gauge = 0.0, rotated = 0.0;
    const Matrix3 m = gauge_m();
    for (int i = 0; i < n_points; ++i) {
        const Vec2 q{u(rng), u(rng)};
        const Vec2 p{u(rng), u(rng)};
        const Matrix3 v = potential_matrix(q);
        const double radius = norm(q);
        Matrix3 sum = Matrix3::Zero();
        for (Mode a : kModes) {
            const Matrix3 pa = projector(q, a);
            sum += pa;
            idem = std::max(idem, (pa * pa - pa).cwiseAbs().maxCoeff());
            eigen = std::max(eigen, (v * pa - ell(a) * radius * pa).cwiseAbs().maxCoeff());
            for (Mode b : kModes) {
                if (a != b) ortho = std::max(ortho, (pa * projector(q, b)).cwiseAbs().maxCoeff());
            }
        }
        complete = std::max(complete, (sum - Matrix3::Identity()).cwiseAbs().maxCoeff());
        gauge = std::max(gauge, (m * v * m - gauge_w(q)).cwiseAbs().maxCoeff());
        const double pn = norm(p);
        const Matrix3 rot = gauge_r(p);
        const Matrix3 target = -gauge_w(Vec2{dot(p, q) / pn, wedge(p, q) / pn});
        rotated = std::max(rotated, (rot * gauge_w(q) * rot.transpose() - target).cwiseAbs().maxCoeff());
    }
    r.add("idempotence", idem, 1e-12);
    r.add("completeness", complete, 1e-12);
    r.add("orthogonality", ortho, 1e-12);
    r.add("eigen_equation", eigen, 1e-12);
    r.add("gauge_m", gauge, 1e-12);
    r.add("gauge_r", rotated, 1e-12);

    double stochastic = 0.0;
    for (double t = 0.0; t <= 1.0; t += 0.125) {
        const Matrix3 b = branching_matrix(t);
        stochastic = std::max({stochastic, (b.colwise().sum().array() - 1.0).abs().maxCoeff(),
                               (b.rowwise().sum().array() - 1.0).abs().maxCoeff()});
    }
    r.add("branching_doubly_stochastic", stochastic, 1e-15);
    return r;
}

Report verify_classical(int n_states, std::uint64_t seed) {
    Report r;
    IntegratorSettings settings;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (Mode m : kModes) {
        double de = 0.0, deta = 0.0, back = 0.0;
        for (int i = 0; i < n_states; ++i) {
            const PhaseState s0{{u(rng), u(rng)}, {u(rng), u(rng)}, 0.0, m};
            const PhaseState s1 = integrate(s0, 1.0, settings);
            const PhaseState s2 = integrate(s1, 0.0, settings);
            de = std::max(de, std::abs(energy(s1) - energy(s0)));
            deta = std::max(deta, std::abs(wedge_invariant(s1) - wedge_invariant(s0)));
            back = std::max({back, norm(s2.q - s0.q), norm(s2.p - s0.p)});
        }
        const std::string tag = to_string(m);
        r.add("energy_drift_" + tag, de, 1e-8);
        r.add("wedge_drift_" + tag, deta, 1e-8);
        r.add("time_reversal_" + tag, back, 1e-8);
    }

    const PhaseState centre{{0.5, 0.05}, {-1.0, 0.0}, 0.0, Mode::Plus};
    const auto ev = detect_crossing(centre, 1.0, settings);
    if (!ev) {
        r.add("figure1_crossing_found", 1.0, 0.0);
        return r;
    }
    r.add("figure1_eta", std::abs(ev->eta - 0.05), 1e-6);
    r.add("figure1_p_norm", std::abs(ev->p_norm - 1.415976), 1e-6);
    r.add("figure1_t_star", std::abs(hop_transition(ev->eta, ev->p_norm, 0.01) - 0.870821), 1e-5);
    return r;
}

} // namespace pjt
