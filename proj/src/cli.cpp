/// @file cli.cpp
/// Verification campaigns, reports, field plots and command dispatch.

#include "symplab/cli.hpp"
#include "symplab/extension_engine.hpp"
#include "symplab/flux_calabi.hpp"
#include "symplab/quasimorphism.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

namespace symplab::cli {

namespace {

/// Failure to write an output file.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string chart_name(int j) { return "chart " + std::to_string(j + 1); }

/// max that propagates NaN.
double worse(double acc, double v) { return (std::isnan(acc) || std::isnan(v)) ? kNaN : std::max(acc, v); }

QuadratureConfig quad_config(const Scenario& s) {
    QuadratureConfig q;
    q.panels_per_unit = s.res.panels;
    return q;
}

/// Uniform point of the punctured torus by rejection.
Vec2 sample_chart_point(std::mt19937_64& rng, const Epsilon& eps) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (;;) {
        Vec2 p{u(rng), u(rng)};
        if (in_punctured_torus(TorusPoint(p.x, p.y), eps)) return p;
    }
}

/// Lower-left corner of a square of the given side lying inside the punctured torus.
Vec2 sample_square_corner(std::mt19937_64& rng, const Epsilon& eps, double side) {
    std::uniform_real_distribution<double> u(0.0, 1.0 - side);
    for (;;) {
        Vec2 p{u(rng), u(rng)};
        bool inside = true;
        for (Vec2 c : {p, p + Vec2{side, 0}, p + Vec2{0, side}, p + Vec2{side, side}})
            inside = inside && in_punctured_torus(TorusPoint(c.x, c.y), eps, 0.0);
        // The inner square is convex, so four corners outside it keep the square outside it
        // unless the square straddles it; squares smaller than the inner square cannot.
        if (inside) return p;
    }
}

Json vec_json(const std::vector<double>& v) {
    Json a = Json::array();
    for (double x : v) a.push_back(x);
    return a;
}

/// Generator words of one chart.
struct ChartWords {
    Word s, sp, t, tp, h, hp;
};

ChartWords chart_words(int j, const Quadruple& q, const Epsilon& eps) {
    return {sigma(j, q, eps), sigma_prime(j, q, eps), tau(j, q, eps),
            tau_prime(j, q, eps), ham(j, q, eps),      ham_prime(j, q, eps)};
}

}  // namespace

Check& Report::add(std::string name, double residual, double tolerance, Json detail) {
    Check c{std::move(name), residual, tolerance, residual <= tolerance, std::move(detail)};
    checks.push_back(std::move(c));
    return checks.back();
}

bool Report::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

Json Report::to_json() const {
    Json j;
    j["command"] = command;
    j["config"] = config;
    Json cs = Json::array();
    long failed = 0;
    for (const auto& c : checks) {
        Json e;
        e["name"] = c.name;
        e["residual"] = std::isnan(c.residual) ? Json(nullptr) : Json(c.residual);
        e["tolerance"] = c.tolerance;
        e["pass"] = c.pass;
        if (!c.detail.empty()) e["detail"] = c.detail;
        cs.push_back(e);
        failed += c.pass ? 0 : 1;
    }
    j["checks"] = cs;
    j["data"] = data;
    j["summary"] = {{"checks", checks.size()}, {"failed", failed}};
    j["pass"] = pass();
    return j;
}

std::string Report::to_csv() const {
    std::ostringstream os;
    os << "command,name,residual,tolerance,pass\n";
    for (const auto& c : checks) {
        std::string name = c.name;
        std::string quoted = "\"";
        for (char ch : name) quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        quoted += "\"";
        os << command << "," << quoted << "," << (std::isnan(c.residual) ? std::string("nan") : num17(c.residual))
           << "," << num17(c.tolerance) << "," << (c.pass ? "true" : "false") << "\n";
    }
    return os.str();
}

Report verify_lemmas(const Scenario& s) {
    Report rep{"verify-lemmas", s.echo, {}};
    const SurfaceModel& model = s.model;
    const Epsilon& eps = model.epsilon();
    const double e = eps.value();
    const int genus = model.genus();
    const QuadratureConfig qc = quad_config(s);
    QuadratureConfig qc2 = qc;
    qc2.panels_per_unit = 2 * qc.panels_per_unit;
    const MapEvaluator ev;

    // Integrals of H_{q,r} and H'_{q,r} over a sweep of 0 < r <= |q| <= eps plus the scenario's bumps.
    std::vector<std::pair<double, double>> sweep;
    for (int i = 0; i < 10; ++i) {
        double q = e * (i + 1) / 10.0 * (i % 2 ? -1.0 : 1.0);
        sweep.emplace_back(q, std::abs(q) * (0.25 + 0.075 * i));
    }
    for (const auto& q : s.quads) {
        double delta = q.delta().value();
        for (const Number* x : {&q.c, &q.d})
            if (!x->is_zero()) sweep.emplace_back(x->value(), delta);
    }
    double r_int = 0.0, r_res = 0.0;
    Json rows = Json::array();
    for (auto [q, r] : sweep)
        for (bool primed : {false, true}) {
            double v = hamiltonian_integral(q, r, primed, eps, qc).value;
            double v2 = hamiltonian_integral(q, r, primed, eps, qc2).value;
            r_int = worse(r_int, std::abs(v + q));
            r_res = worse(r_res, std::abs(v - v2));
            rows.push_back({{"q", q}, {"r", r}, {"primed", primed}, {"integral", v}});
        }
    rep.add("integral of H_{q,r} over P_eps equals -q", r_int, s.tol.hamiltonian_integral, {{"samples", rows}});
    rep.add("integrals agree at doubled quadrature resolution", r_res, s.tol.hamiltonian_integral,
            {{"panels", qc.panels_per_unit}, {"doubled_panels", qc2.panels_per_unit}});

    for (int j = 0; j < genus; ++j) {
        const Quadruple& q = s.quads[static_cast<std::size_t>(j)];
        const std::string cn = " [" + chart_name(j) + "]";
        const ChartWords w = chart_words(j, q, eps);

        // Strips |x| <= 1.5 eps or |y| <= 1.5 eps, where G^c = -c y and G'^d = -d x.
        VectorField Y = field_Y(q.c.value(), eps), Yp = field_Y_prime(q.d.value(), eps);
        double ry = 0.0, ryp = 0.0;
        long strip_points = 0;
        const int n = s.res.strip_grid;
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                Vec2 p{(ix + 0.5) / n, (iy + 0.5) / n};
                if (std::abs(centered(p.x)) > 1.5 * e && std::abs(centered(p.y)) > 1.5 * e) continue;
                ++strip_points;
                Vec2 y = Y.value(p), yp = Yp.value(p);
                ry = worse(ry, std::hypot(y.x - q.c.value(), y.y));
                ryp = worse(ryp, std::hypot(yp.x, yp.y + q.d.value()));
            }
        rep.add("Y_c equals (c, 0) on the strips" + cn, ry, s.tol.strip, {{"strip_points", strip_points}});
        rep.add("Y'_d equals (0, -d) on the strips" + cn, ryp, s.tol.strip, {{"strip_points", strip_points}});

        // Generator fluxes: line quadrature against the closed forms, zero pairings included.
        double rf = 0.0;
        Json fl = Json::array();
        for (const Word* g : {&w.s, &w.sp, &w.t, &w.tp}) {
            const Generator& gen = g->letters().front().gen;
            FluxResult fr = flux_of_generator(gen, genus, qc);
            CohomologyClass ex = symbolic_flux_of_generator(gen, genus);
            std::vector<double> exv = ex.values();
            for (std::size_t i = 0; i < exv.size(); ++i) rf = worse(rf, std::abs(fr.raw[i] - exv[i]));
            fl.push_back({{"generator", gen.str()}, {"numeric", vec_json(fr.raw)}, {"exact", ex.str()}});
        }
        rep.add("generator fluxes match b[beta]*, a[alpha]*, c[alpha]*, d[beta]*" + cn, rf, s.tol.flux,
                {{"generators", fl}});

        // Commutation relations and the commutator identities.
        const std::vector<std::tuple<std::string, Word, Word>> statements{
            {"sigma commutes with tau sigma^-1 tau^-1", w.s * (w.t * w.s.inverse() * w.t.inverse()),
             (w.t * w.s.inverse() * w.t.inverse()) * w.s},
            {"sigma' commutes with tau'^-1 sigma'^-1 tau'", w.sp * (w.tp.inverse() * w.sp.inverse() * w.tp),
             (w.tp.inverse() * w.sp.inverse() * w.tp) * w.sp},
            {"sigma commutes with tau'", w.s * w.tp, w.tp * w.s},
            {"sigma' commutes with tau", w.sp * w.t, w.t * w.sp},
            {"[sigma', tau'^-1] equals h'", commutator(w.sp, w.tp.inverse()), w.hp},
            {"[sigma, tau] equals h", commutator(w.s, w.t), w.h},
        };
        for (const auto& [name, lhs, rhs] : statements) {
            MapsEqualResult me = maps_equal(lhs, rhs, model, ev, s.res.grid, s.tol.maps);
            rep.add(name + cn, me.max_distance, s.tol.maps,
                    {{"grid", s.res.grid},
                     {"worst_chart", me.worst.chart + 1},
                     {"worst_point", {me.worst.p.x, me.worst.p.y}}});
        }

        // Calabi values of the commutators through the oracle.
        const std::vector<std::tuple<std::string, Word, Number>> calabi{
            {"mu_P([sigma, tau]) equals -bc", commutator(w.s, w.t), -(q.b * q.c)},
            {"mu_P([sigma', tau'^-1]) equals -ad", commutator(w.sp, w.tp.inverse()), -(q.a * q.d)},
        };
        for (const auto& [name, word, expect] : calabi) {
            try {
                MuPResult r = mu_p_oracle(word, model, qc);
                Number diff = abs(r.value - expect);
                rep.add(name + " exactly" + cn, diff.value(), s.tol.calabi,
                        {{"oracle", r.value.str()}, {"expected", expect.str()}, {"exact", r.value.is_exact()}});
                rep.add(name + " numerically" + cn, std::abs(r.numeric - expect.value()), s.tol.calabi,
                        {{"numeric", r.numeric}, {"quadrature_error", r.quadrature_error}});
            } catch (const NotOracleReducible& ex) {
                rep.add(name + cn, kNaN, s.tol.calabi, {{"error", ex.what()}});
            }
        }

        // Area preservation: Jacobian determinants and image areas of small squares.
        const std::vector<std::pair<std::string, Word>> area_words{
            {"sigma", w.s},   {"sigma'", w.sp}, {"tau", w.t}, {"tau'", w.tp}, {"[sigma, tau]", commutator(w.s, w.t)},
            {"[sigma', tau'^-1]", commutator(w.sp, w.tp.inverse())}};
        double rj = 0.0;
        for (std::size_t k = 0; k < area_words.size(); ++k) {
            auto rng = seed_stream(s.seed, 1000 + 100 * static_cast<std::uint64_t>(j) + k);
            for (int i = 0; i < s.res.jacobian_samples; ++i) {
                Vec2 p = sample_chart_point(rng, eps);
                auto [img, jac] = ev.eval_with_jacobian(area_words[k].second, {j, p});
                rj = worse(rj, std::abs(jac.det() - 1.0));
            }
        }
        rep.add("Jacobian determinants of generators and commutators equal 1" + cn, rj, s.tol.jacobian,
                {{"samples_per_word", s.res.jacobian_samples}, {"words", area_words.size()}});
        double ra = 0.0;
        Json aw = Json::array();
        const double side = s.res.area_side;
        for (std::size_t k = 0; k < area_words.size(); ++k) {
            auto rng = seed_stream(s.seed, 2000 + 100 * static_cast<std::uint64_t>(j) + k);
            double worst = 0.0;
            for (int i = 0; i < s.res.area_squares; ++i) {
                Vec2 c = sample_square_corner(rng, eps, side);
                double a = image_area(area_words[k].second, {j, c}, side, ev);
                worst = worse(worst, std::abs(a - side * side) / (side * side));
            }
            ra = worse(ra, worst);
            aw.push_back({{"word", area_words[k].first},
                          {"worst_relative_error", std::isnan(worst) ? Json(nullptr) : Json(worst)}});
        }
        rep.add("square images keep their area" + cn, ra, s.tol.area,
                {{"squares_per_word", s.res.area_squares}, {"side", side}, {"words", aw}});
    }

    // gamma_1 moves points across the strips of every chart.
    {
        Word g1 = build_gamma_words(model, s.quads, 1).gamma_m;
        auto rng = seed_stream(s.seed, 3000);
        double rj = 0.0;
        for (int i = 0; i < s.res.jacobian_samples; ++i) {
            int chart = i % genus;
            Vec2 p = sample_chart_point(rng, eps);
            auto [img, jac] = ev.eval_with_jacobian(g1, {chart, p});
            rj = worse(rj, std::abs(jac.det() - 1.0));
        }
        rep.add("Jacobian determinant of gamma_1 equals 1", rj, s.tol.jacobian,
                {{"samples", s.res.jacobian_samples}, {"letters", g1.size()}});
    }
    return rep;
}

Report main_theorem_demo(const Scenario& s) {
    Report rep{"main-theorem-demo", s.echo, {}};
    const SurfaceModel& model = s.model;
    const Epsilon& eps = model.epsilon();
    const int genus = model.genus();
    const QuadratureConfig qc = quad_config(s);
    QuadratureConfig qc2 = qc;
    qc2.panels_per_unit = 2 * qc.panels_per_unit;
    const MapEvaluator ev;

    std::vector<Quadruple> quads = s.quads;
    if (s.theorem) {
        quads.clear();
        const Number k(s.theorem->k);
        for (int j = 0; j < genus; ++j)
            quads.push_back({s.theorem->v_bar.alpha(j), s.theorem->v_bar.beta(j), s.theorem->w_bar.alpha(j) / k,
                             s.theorem->w_bar.beta(j) / k});
    }
    CohomologyClass v(genus), w(genus);
    for (int j = 0; j < genus; ++j) {
        const Quadruple& q = quads[static_cast<std::size_t>(j)];
        v.alpha(j) = q.a;
        v.beta(j) = q.b;
        w.alpha(j) = q.c;
        w.beta(j) = q.d;
    }
    const Number b = intersection_form(v, w);
    rep.data["v"] = v.str();
    rep.data["w"] = w.str();
    rep.data["cup_product"] = b.str();
    Json qs = Json::array();
    for (const auto& q : quads) qs.push_back(q.str());
    rep.data["quadruples"] = qs;
    if (s.theorem) {
        Number bb = intersection_form(s.theorem->v_bar, s.theorem->w_bar);
        rep.data["cup_product_bar"] = bb.str();
        rep.data["k"] = s.theorem->k;
        rep.data["k0"] = s.theorem->k0;
        rep.add("b_I(v, w) equals b_I(v_bar, w_bar) / k", abs(b - bb / Number(s.theorem->k)).value(), s.tol.cup,
                {{"b_I(v,w)", b.str()}, {"b_I(v_bar,w_bar)", bb.str()}});
    }

    // Fluxes of f_m, g_alpha g_beta and gamma_m.
    const GammaWords w1 = build_gamma_words(model, quads, 1);
    {
        Word gg = w1.g_alpha * w1.g_beta;
        FluxResult fr = flux_of_word(gg, genus, qc);
        double r = std::max(max_abs_difference(fr.cls, w), max_abs_difference(symbolic_flux_of_word(gg, genus), w));
        rep.add("flux(g_alpha g_beta) equals w", r, s.tol.flux, {{"numeric", vec_json(fr.raw)}});
    }
    double r_fm = 0.0, r_gf = 0.0, r_ex = 0.0, r_num = 0.0;
    Json rows = Json::array();
    std::vector<double> ms, vals;
    bool reducible = true;
    for (long m = s.m_lo; m <= s.m_hi; ++m) {
        GammaWords sw = build_gamma_words(model, quads, m);
        CohomologyClass mv = Number(m) * v;
        FluxResult ff = flux_of_word(sw.f_m, genus, qc);
        r_fm = worse(r_fm, std::max(max_abs_difference(ff.cls, mv),
                                    max_abs_difference(symbolic_flux_of_word(sw.f_m, genus), mv)));
        FluxResult fg = flux_of_word(sw.gamma_m, genus, qc);
        double gmax = 0.0;
        for (double x : fg.raw) gmax = worse(gmax, std::abs(x));
        if (!symbolic_flux_of_word(sw.gamma_m, genus).is_exact() ||
            !(symbolic_flux_of_word(sw.gamma_m, genus) == CohomologyClass(genus)))
            gmax = worse(gmax, max_abs_difference(symbolic_flux_of_word(sw.gamma_m, genus), CohomologyClass(genus)));
        r_gf = worse(r_gf, gmax);
        Number expect = Number(m) * b;
        Json row = {{"m", m}, {"expected", expect.str()}, {"gamma_flux_max", gmax}};
        try {
            MuPResult r = mu_p_oracle(sw.gamma_m, model, qc);
            r_ex = worse(r_ex, abs(r.value - expect).value());
            r_num = worse(r_num, std::abs(r.numeric - expect.value()));
            ms.push_back(static_cast<double>(m));
            vals.push_back(r.numeric);
            row["oracle"] = r.value.str();
            row["numeric"] = r.numeric;
            row["defect_multiple"] = r.defect_multiple;
            row["factors"] = r.factors.size();
        } catch (const NotOracleReducible& ex) {
            reducible = false;
            row["error"] = ex.what();
        }
        rows.push_back(row);
    }
    rep.data["gamma"] = rows;
    rep.add("flux(f_m) equals m v", r_fm, s.tol.flux);
    rep.add("flux(gamma_m) vanishes", r_gf, s.tol.gamma_flux);
    rep.add("mu_P(gamma_m) equals m b_I(v, w) exactly", reducible ? r_ex : kNaN, s.tol.calabi);
    rep.add("numeric Calabi decomposition of gamma_m matches m b_I(v, w)", reducible ? r_num : kNaN, s.tol.oracle);

    // Least-squares slope of the numeric values in m.
    double slope = kNaN;
    if (reducible && !ms.empty()) {
        if (ms.size() == 1) {
            slope = vals[0] / ms[0];
        } else {
            double mx = 0, my = 0;
            for (std::size_t i = 0; i < ms.size(); ++i) mx += ms[i], my += vals[i];
            mx /= static_cast<double>(ms.size());
            my /= static_cast<double>(ms.size());
            double sxy = 0, sxx = 0;
            for (std::size_t i = 0; i < ms.size(); ++i) sxy += (ms[i] - mx) * (vals[i] - my), sxx += (ms[i] - mx) * (ms[i] - mx);
            slope = sxy / sxx;
        }
    }
    rep.data["slope"] = std::isnan(slope) ? Json(nullptr) : Json(slope);
    rep.add("slope of mu_P(gamma_m) in m equals b_I(v, w)", std::abs(slope - b.value()), s.tol.oracle,
            {{"slope", std::isnan(slope) ? Json(nullptr) : Json(slope)}, {"b_I", b.value()}});

    // Independent slope: sum over charts of b_j int H_{c_j} - a_j int H'_{d_j}, at doubled resolution.
    double summed = 0.0;
    for (const auto& q : quads) {
        double delta = q.delta().value();
        if (!q.c.is_zero() && !q.b.is_zero())
            summed += q.b.value() * hamiltonian_integral(q.c.value(), delta, false, eps, qc2).value;
        if (!q.d.is_zero() && !q.a.is_zero())
            summed -= q.a.value() * hamiltonian_integral(q.d.value(), delta, true, eps, qc2).value;
    }
    rep.data["slope_from_integrals"] = summed;
    rep.add("slope from summed Hamiltonian integrals equals b_I(v, w)", std::abs(summed - b.value()), s.tol.oracle,
            {{"slope", summed}});

    // Commuting library: verified commutation and vanishing cup products.
    {
        std::vector<CommutingPair> lib = commuting_pair_library(model, s.quads);
        double rc = 0.0, rcup = 0.0;
        Json pairs = Json::array();
        for (const auto& pr : lib) {
            MapsEqualResult me = maps_equal(pr.f * pr.g, pr.g * pr.f, model, ev, s.res.commuting_grid, s.tol.maps);
            FluxResult ff = flux_of_word(pr.f, genus, qc), fg = flux_of_word(pr.g, genus, qc);
            double cup = 0.0;
            for (int j = 0; j < genus; ++j)
                cup += ff.raw[2 * j] * fg.raw[2 * j + 1] - ff.raw[2 * j + 1] * fg.raw[2 * j];
            Number exact = intersection_form(symbolic_flux_of_word(pr.f, genus), symbolic_flux_of_word(pr.g, genus));
            rc = worse(rc, me.max_distance);
            rcup = worse(rcup, std::max(std::abs(cup), abs(exact).value()));
            pairs.push_back({{"label", pr.label}, {"distance", me.max_distance}, {"cup", cup}});
        }
        rep.add("commuting library has at least 20 pairs", std::max(0.0, 20.0 - static_cast<double>(lib.size())),
                0.0, {{"pairs", lib.size()}});
        rep.add("commuting library pairs commute", rc, s.tol.maps, {{"grid", s.res.commuting_grid}});
        rep.add("cup products of commuting fluxes vanish", rcup, s.tol.cup, {{"pairs", pairs}});
    }

    // The sigma maps with b = 1, one per chart: commuting, fluxes spanning a rank-l isotropic subspace.
    {
        Eigen::MatrixXd F(genus, 2 * genus);
        std::vector<Word> fam;
        for (int j = 0; j < genus; ++j) {
            Quadruple q = s.quads[static_cast<std::size_t>(j)];
            q.b = Number(1);
            fam.push_back(sigma(j, q, eps));
            FluxResult fr = flux_of_word(fam.back(), genus, qc);
            for (int i = 0; i < 2 * genus; ++i) F(j, i) = fr.raw[static_cast<std::size_t>(i)];
        }
        double rc = 0.0, rcup = 0.0;
        for (int i = 0; i < genus; ++i)
            for (int j = i + 1; j < genus; ++j) {
                rc = worse(rc, maps_equal(fam[i] * fam[j], fam[j] * fam[i], model, ev, s.res.commuting_grid, s.tol.maps)
                                   .max_distance);
                double cup = 0.0;
                for (int c = 0; c < genus; ++c) cup += F(i, 2 * c) * F(j, 2 * c + 1) - F(i, 2 * c + 1) * F(j, 2 * c);
                rcup = worse(rcup, std::abs(cup));
            }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(F);
        lu.setThreshold(1e-6);
        const long rank = lu.rank();
        rep.add("sigma family with b = 1 commutes", rc, s.tol.maps);
        rep.add("sigma family fluxes are isotropic", rcup, s.tol.cup);
        rep.add("sigma family fluxes have rank l", std::abs(static_cast<double>(rank - genus)), 0.0,
                {{"rank", rank}, {"genus", genus}});
    }
    return rep;
}

Report qm_report(const Scenario& s) {
    Report rep{"qm-report", s.echo, {}};
    FreeByAbelian f2(2, 0);
    Json rows = Json::array();
    for (std::size_t i = 0; i < s.qm.words.size(); ++i) {
        const std::string& word = s.qm.words[i];
        const FreeWord fw = parse_free_word(word);
        QuasimorphismFn phi = brooks_counting(fw, true, 2);
        QuasimorphismFn phih = brooks_homogeneous(fw, 2);
        const double D = *phi.known_defect;
        const std::string tag = " [" + word + "]";
        const int L = s.qm.exhaustive_length;

        DefectSample ex = exhaustive_defect(phi, 2, L);
        rep.add("exhaustive defect equals the exact defect" + tag, std::abs(ex.value - D), s.tol.qm,
                {{"exact", D}, {"exhaustive", ex.value}, {"max_length", L}});

        double dist = 0.0;
        for (const auto& x : all_reduced_words(2, L)) {
            Element e = f2.from_word(x);
            dist = std::max(dist, std::abs(phih(e) - phi(e)));
        }
        rep.add("|phi_h - phi| <= D(phi) on all words up to length " + std::to_string(L) + tag, dist, D + s.tol.qm);
        DefectSample exh = exhaustive_defect(phih, 2, L);
        rep.add("D(phi_h) <= 2 D(phi) on all words up to length " + std::to_string(L) + tag, exh.value,
                2 * D + s.tol.qm);

        double sdist = 0.0;
        for (long k = 0; k < s.qm.pairs; ++k) {
            auto rng = seed_stream(s.seed + 7919 * (i + 1), static_cast<std::uint64_t>(k));
            Element e = f2.sample(rng, s.qm.sample_length);
            sdist = std::max(sdist, std::abs(phih(e) - phi(e)));
        }
        rep.add("|phi_h - phi| <= D(phi) on sampled elements" + tag, sdist, D + s.tol.qm, {{"samples", s.qm.pairs}});
        DefectSample sh = estimate_defect(phih, f2, s.qm.pairs, s.seed + 104729 * (i + 1), s.qm.sample_length);
        rep.add("sampled D(phi_h) <= 2 D(phi)" + tag, sh.value, 2 * D + s.tol.qm, {{"pairs", sh.pairs}});
        rows.push_back({{"word", word},
                        {"defect", D},
                        {"exhaustive_defect_h", exh.value},
                        {"sampled_defect_h", sh.value},
                        {"max_homogenization_gap", std::max(dist, sdist)}});
    }
    rep.data["quasimorphisms"] = rows;
    return rep;
}

namespace {

FreeWord swap_ab(const FreeWord& w) {
    FreeWord out;
    for (int l : w) out.push_back(l > 0 ? 3 - l : -(3 + l));
    return out;
}

}  // namespace

Report extend_demo(const ExtendConfig& c) {
    Report rep{"extend-demo", c.echo, {}};
    std::shared_ptr<const ExtensionProblem> p;
    try {
        if (c.kind == "free_times_real")
            p = free_times_real_problem(parse_free_word(c.word));
        else if (c.kind == "free_times_integer")
            p = free_times_integer_problem();
        else if (c.kind == "virtual_split")
            p = virtual_split_problem(c.index);
        else
            p = heisenberg_problem(c.heisenberg_lattice[0], c.heisenberg_lattice[1]);
    } catch (const ExtensionError& e) {
        // Refusal is the expected outcome only when no splitting exists.
        const bool expected = c.kind == "heisenberg";
        rep.add("construction is refused without a virtual splitting", expected ? 0.0 : 1.0, 0.0,
                {{"error", e.what()}});
        return rep;
    }
    if (c.kind == "heisenberg") {
        rep.add("construction is refused without a virtual splitting", 1.0, 0.0);
        return rep;
    }
    const auto& model = dynamic_cast<const FreeByAbelian&>(p->ghat());
    std::vector<std::pair<double, FreeWord>> terms;
    for (const auto& [coef, w] : c.terms) terms.emplace_back(coef, parse_free_word(w));
    QuasimorphismFn phi = brooks_combination(terms, c.homogeneous);
    const double D = *phi.known_defect;
    // Homogeneous quasimorphisms are conjugation invariant on F_2; the swap action also needs
    // a swap-symmetric combination. Otherwise phi(x^-1) = -phi(x) gives D' <= 2 D.
    bool invariant = c.homogeneous;
    if (invariant && model.swaps()) {
        std::map<FreeWord, double> a, b;
        for (const auto& [coef, w] : terms) {
            a[w] += coef;
            b[swap_ab(w)] += coef;
        }
        invariant = a == b;
    }
    const double Dp = invariant ? 0.0 : 2 * D;
    rep.data["problem"] = p->name();
    rep.data["index"] = p->kind() == ExtensionProblem::Kind::discrete ? Json(p->index()) : Json(nullptr);
    rep.data["defect"] = D;
    rep.data["invariance_defect_bound"] = Dp;

    ExtensionConfig ecfg;
    ecfg.method = c.method == "gauss" ? ExtensionConfig::Method::gauss : ExtensionConfig::Method::monte_carlo;
    ecfg.nodes = c.nodes;
    ecfg.mc_samples = c.mc_samples;
    ecfg.seed = c.seed;
    ExtendedQM ext(phi, p, ecfg);

    DefectSample inv = estimate_invariance_defect(phi, p->subgroup(), model, c.invariance_samples, c.seed + 11, c.length);
    rep.add("sampled invariance defect within D'", inv.value, Dp + c.slack, {{"samples", c.invariance_samples}});

    double rr = 0.0;
    for (long i = 0; i < c.restriction_samples; ++i) {
        auto rng = seed_stream(c.seed + 13, static_cast<std::uint64_t>(i));
        Element h = model.from_word(model.sample_word(rng, c.length));
        rr = worse(rr, std::abs(ext(h) - phi(h)));
    }
    rep.add("phi_hat restricts to phi on G", rr, 0.0, {{"samples", c.restriction_samples}});

    DefectSample d = estimate_defect(ext.as_quasimorphism(D + 3 * Dp), model, c.defect_pairs, c.seed + 17, c.length);
    rep.add("sampled defect of phi_hat within D + 3D'", d.value, D + 3 * Dp + c.slack,
            {{"pairs", d.pairs}, {"worst_x", element_str(d.x)}, {"worst_y", element_str(d.y)}});

    double rs = 0.0;
    for (long i = 0; i < c.shifts; ++i) {
        auto rng = seed_stream(c.seed + 19, static_cast<std::uint64_t>(i));
        Element g = model.sample(rng, c.length);
        QVec a = p->sample_q(rng, 10);
        rs = worse(rs, std::abs(ext.evaluate_shifted(g, a) - ext(g)));
    }
    rep.add("phi_hat is invariant under shifts of the averaging domain", rs, c.slack, {{"shifts", c.shifts}});

    double rstep = 0.0, ravg = 0.0;
    for (long i = 0; i < c.chains; ++i) {
        auto rng = seed_stream(c.seed + 23, static_cast<std::uint64_t>(i));
        Element g1 = model.sample(rng, c.length), g2 = model.sample(rng, c.length);
        DefectChain ch = ext.defect_chain(g1, g2, D, Dp);
        for (const auto& st : ch.steps) rstep = worse(rstep, std::max(0.0, st.slack - st.allowed));
        ravg = worse(ravg, ch.averaging_slack);
    }
    rep.add("defect chain steps stay within their bounds", rstep, c.slack, {{"chains", c.chains}});
    rep.add("defect chain averaging matches phi_hat", ravg, c.slack, {{"chains", c.chains}});
    return rep;
}

FieldSamples sample_field(const std::string& name, const std::function<Vec2(Vec2)>& field, int grid) {
    FieldSamples f{name, grid, {}, {}};
    for (int iy = 0; iy < grid; ++iy)
        for (int ix = 0; ix < grid; ++ix) {
            Vec2 p{(ix + 0.5) / grid, (iy + 0.5) / grid};
            f.points.push_back(p);
            f.values.push_back(field(p));
        }
    return f;
}

std::string field_csv(const FieldSamples& f) {
    std::ostringstream os;
    os << "x,y,u,v\n";
    for (std::size_t i = 0; i < f.points.size(); ++i)
        os << num17(f.points[i].x) << "," << num17(f.points[i].y) << "," << num17(f.values[i].x) << ","
           << num17(f.values[i].y) << "\n";
    return os.str();
}

std::string field_svg(const FieldSamples& f, double eps) {
    const double size = 600.0, margin = 30.0;
    auto X = [&](double x) { return margin + size * x; };
    auto Y = [&](double y) { return margin + size * (1.0 - y); };
    auto fx = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3f", v);
        return std::string(buf);
    };
    double vmax = 0.0;
    for (Vec2 v : f.values) vmax = std::max(vmax, std::hypot(v.x, v.y));
    std::ostringstream os;
    const double total = size + 2 * margin;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fx(total) << "\" height=\"" << fx(total + 20)
       << "\" viewBox=\"0 0 " << fx(total) << " " << fx(total + 20) << "\">\n";
    os << "<title>" << f.name << "</title>\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << fx(total) << "\" height=\"" << fx(total + 20) << "\" fill=\"white\"/>\n";
    // Unit square and the removed inner square (2 eps, 1 - 2 eps)^2.
    os << "<rect x=\"" << fx(X(0)) << "\" y=\"" << fx(Y(1)) << "\" width=\"" << fx(size) << "\" height=\"" << fx(size)
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    os << "<rect x=\"" << fx(X(2 * eps)) << "\" y=\"" << fx(Y(1 - 2 * eps)) << "\" width=\""
       << fx(size * (1 - 4 * eps)) << "\" height=\"" << fx(size * (1 - 4 * eps))
       << "\" fill=\"#dddddd\" stroke=\"#999999\"/>\n";
    const double cell = size / f.grid;
    os << "<g stroke=\"#1f4e9c\" fill=\"#1f4e9c\" stroke-width=\"1\">\n";
    for (std::size_t i = 0; i < f.points.size(); ++i) {
        Vec2 v = f.values[i];
        double m = std::hypot(v.x, v.y);
        if (vmax <= 0.0 || m <= 1e-12 * vmax) continue;
        double len = 0.9 * cell * m / vmax;
        double ux = v.x / m, uy = -v.y / m;  // screen y points down
        double cx = X(f.points[i].x), cy = Y(f.points[i].y);
        double x0 = cx - 0.5 * len * ux, y0 = cy - 0.5 * len * uy;
        double x1 = cx + 0.5 * len * ux, y1 = cy + 0.5 * len * uy;
        double head = std::min(0.35 * len, 0.3 * cell);
        double hx = x1 - head * ux, hy = y1 - head * uy;
        os << "<line x1=\"" << fx(x0) << "\" y1=\"" << fx(y0) << "\" x2=\"" << fx(hx) << "\" y2=\"" << fx(hy)
           << "\"/>";
        os << "<polygon points=\"" << fx(x1) << "," << fx(y1) << " " << fx(hx - 0.5 * head * uy) << ","
           << fx(hy + 0.5 * head * ux) << " " << fx(hx + 0.5 * head * uy) << "," << fx(hy - 0.5 * head * ux)
           << "\"/>\n";
    }
    os << "</g>\n";
    os << "<text x=\"" << fx(margin) << "\" y=\"" << fx(total + 10) << "\" font-family=\"sans-serif\" font-size=\"14\">"
       << f.name << " (max |v| = " << num17(vmax) << ")</text>\n";
    os << "</svg>\n";
    return os.str();
}

Report plot_fields(const Scenario& s, const std::string& out_dir) {
    Report rep{"plot-fields", s.echo, {}};
    const Epsilon& eps = s.model.epsilon();
    const double e = eps.value();
    const Quadruple& q = s.quads.front();
    const ChartWords w = chart_words(0, q, eps);
    const MapEvaluator ev;
    const VectorField Y = field_Y(q.c.value(), eps), Yp = field_Y_prime(q.d.value(), eps);
    const VectorField XA = generator_field(w.s.letters().front().gen);
    const VectorField XpA = generator_field(w.sp.letters().front().gen);
    // Generators of t -> tau sigma^-t tau^-1 and t -> tau'^-1 sigma'^-t tau'.
    auto conj_field = [&](const Word& inner_inv, const Word& outer, const VectorField& X) {
        return [&, inner_inv, outer](Vec2 z) {
            Vec2 y = ev.eval(inner_inv, {0, z}).p;
            Mat2 J = ev.eval_with_jacobian(outer, {0, y}).second;
            return -1.0 * (J * X.value(y));
        };
    };
    const std::vector<std::pair<std::string, std::function<Vec2(Vec2)>>> fields{
        {"Y_c", Y.value},
        {"Y_prime_d", Yp.value},
        {"X_A", XA.value},
        {"X_prime_A", XpA.value},
        {"tau_sigma_flow", conj_field(w.t.inverse(), w.t, XA)},
        {"tau_prime_sigma_prime_flow", conj_field(w.tp, w.tp.inverse(), XpA)},
    };
    std::filesystem::create_directories(out_dir);
    const int g = s.res.plot_grid;
    double rows_res = 0.0, ry = 0.0, ryp = 0.0;
    long strip_rows = 0;
    Json files = Json::array();
    for (const auto& [name, fn] : fields) {
        FieldSamples fs = sample_field(name, fn, g);
        std::string csv = field_csv(fs);
        for (const auto& [ext, body] : {std::pair{std::string(".csv"), csv}, std::pair{std::string(".svg"), field_svg(fs, e)}}) {
            std::filesystem::path path = std::filesystem::path(out_dir) / (name + ext);
            std::ofstream out(path, std::ios::binary);
            out << body;
            if (!out) throw IoError("cannot write " + path.string());
            files.push_back(name + ext);
        }
        // Rows of the written CSV, re-read from disk.
        std::ifstream in(std::filesystem::path(out_dir) / (name + ".csv"));
        std::string line;
        long count = -1;  // header
        std::vector<std::array<double, 4>> parsed;
        while (std::getline(in, line)) {
            if (++count == 0) continue;
            std::array<double, 4> r{};
            std::istringstream ls(line);
            std::string cell;
            for (double& x : r) {
                std::getline(ls, cell, ',');
                x = std::stod(cell);
            }
            parsed.push_back(r);
        }
        rows_res = std::max(rows_res, std::abs(static_cast<double>(count) - static_cast<double>(g) * g));
        if (name == "Y_c" || name == "Y_prime_d") {
            for (const auto& r : parsed) {
                if (std::abs(centered(r[0])) > 1.5 * e && std::abs(centered(r[1])) > 1.5 * e) continue;
                if (name == "Y_c") {
                    ++strip_rows;
                    ry = worse(ry, std::hypot(r[2] - q.c.value(), r[3]));
                } else {
                    ryp = worse(ryp, std::hypot(r[2], r[3] + q.d.value()));
                }
            }
        }
    }
    rep.data["files"] = files;
    rep.data["grid"] = g;
    rep.add("every CSV has grid^2 rows", rows_res, 0.0, {{"fields", fields.size()}});
    rep.add("Y_c CSV rows on the strips are (c, 0)", ry, s.tol.strip, {{"strip_rows", strip_rows}});
    rep.add("Y'_d CSV rows on the strips are (0, -d)", ryp, s.tol.strip, {{"strip_rows", strip_rows}});
    return rep;
}

int run(const std::string& command, const Options& opt, std::ostream& out, std::ostream& err) {
    static const std::vector<std::string> commands{"verify-lemmas", "main-theorem-demo", "extend-demo", "plot-fields",
                                                   "qm-report"};
    if (std::find(commands.begin(), commands.end(), command) == commands.end()) {
        err << "unknown command '" << command << "'\n";
        return 2;
    }
    const bool extend = command == "extend-demo";
    std::string text, source;
    if (opt.config) {
        std::ifstream in(*opt.config, std::ios::binary);
        if (!in) {
            err << *opt.config << ": cannot read config\n";
            return 2;
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
        source = *opt.config;
    } else {
        text = std::string(extend ? default_extend_text() : default_scenario_text());
        source = "<default>";
    }
    try {
        Report rep;
        if (extend) {
            rep = extend_demo(load_extend_config(text, source, opt.seed, opt.tolerance_scale));
        } else {
            Scenario s = load_scenario(text, source, opt.seed, opt.tolerance_scale);
            if (command == "verify-lemmas")
                rep = verify_lemmas(s);
            else if (command == "main-theorem-demo")
                rep = main_theorem_demo(s);
            else if (command == "qm-report")
                rep = qm_report(s);
            else
                rep = plot_fields(s, opt.out_dir.value_or("plots"));
        }
        const bool csv = opt.format == Format::csv;
        const std::string body = csv ? rep.to_csv() : rep.to_json().dump(2) + "\n";
        out << body;
        if (opt.out_dir) {
            std::filesystem::create_directories(*opt.out_dir);
            std::filesystem::path path = std::filesystem::path(*opt.out_dir) / (command + (csv ? ".csv" : ".json"));
            std::ofstream f(path, std::ios::binary);
            f << body;
            if (!f) throw IoError("cannot write " + path.string());
        }
        for (const auto& c : rep.checks)
            if (!c.pass) err << "FAIL " << c.name << ": residual " << num17(c.residual) << " > " << num17(c.tolerance) << "\n";
        return rep.pass() ? 0 : 1;
    } catch (const ConfigError& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const std::filesystem::filesystem_error& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        err << e.what() << "\n";
        return 2;
    }
}

}  // namespace symplab::cli
