#include "symplab/flux_calabi.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

namespace symplab {

namespace {

void check_chart(const Generator& g, int genus) {
    if (g.chart() >= genus) throw std::invalid_argument("generator chart " + std::to_string(g.chart() + 1) +
                                                        " exceeds genus " + std::to_string(genus));
}

}  // namespace

FluxResult flux_of_generator(const Generator& g, int genus, const QuadratureConfig& cfg) {
    check_chart(g, genus);
    VectorField X = generator_field(g);
    auto along_alpha = [&X](double t) { return X.value({0.0, t}).x; };
    auto along_beta = [&X](double t) { return -X.value({t, 0.0}).y; };
    QuadratureResult pa = integrate_line(along_alpha, 0.0, 1.0, X.y_breaks, cfg);
    QuadratureResult pb = integrate_line(along_beta, 0.0, 1.0, X.x_breaks, cfg);
    FluxResult res{CohomologyClass(genus), std::vector<double>(2 * static_cast<std::size_t>(genus), 0.0),
                   pa.error_estimate + pb.error_estimate};
    res.raw[2 * g.chart()] = pa.value;
    res.raw[2 * g.chart() + 1] = pb.value;
    res.cls.alpha(g.chart()) = Number(pa.value);
    res.cls.beta(g.chart()) = Number(pb.value);
    return res;
}

CohomologyClass symbolic_flux_of_generator(const Generator& g, int genus) {
    check_chart(g, genus);
    CohomologyClass c(genus);
    const Quadruple& q = g.quadruple();
    switch (g.kind()) {
        case GenKind::sigma: c.beta(g.chart()) = g.time() * q.b; break;
        case GenKind::sigma_prime: c.alpha(g.chart()) = g.time() * q.a; break;
        case GenKind::tau: c.alpha(g.chart()) = g.time() * q.c; break;
        case GenKind::tau_prime: c.beta(g.chart()) = g.time() * q.d; break;
        case GenKind::ham:
        case GenKind::ham_prime: break;
    }
    return c;
}

FluxResult flux_of_word(const Word& w, int genus, const QuadratureConfig& cfg) {
    FluxResult total{CohomologyClass(genus), std::vector<double>(2 * static_cast<std::size_t>(genus), 0.0), 0.0};
    std::vector<std::pair<Generator, FluxResult>> cache;
    for (const Letter& l : w.letters()) {
        const FluxResult* fr = nullptr;
        for (const auto& [g, r] : cache)
            if (g == l.gen) fr = &r;
        if (!fr) {
            cache.emplace_back(l.gen, flux_of_generator(l.gen, genus, cfg));
            fr = &cache.back().second;
        }
        double e = static_cast<double>(l.exponent);
        for (std::size_t i = 0; i < total.raw.size(); ++i) total.raw[i] += e * fr->raw[i];
        total.error_estimate += std::abs(e) * fr->error_estimate;
    }
    for (int j = 0; j < genus; ++j) {
        total.cls.alpha(j) = Number(total.raw[2 * j]);
        total.cls.beta(j) = Number(total.raw[2 * j + 1]);
    }
    return total;
}

CohomologyClass symbolic_flux_of_word(const Word& w, int genus) {
    CohomologyClass total(genus);
    for (const Letter& l : w.letters()) total += Number(l.exponent) * symbolic_flux_of_generator(l.gen, genus);
    return total;
}

FluxResult flux_of_flow_time(const Generator& g, const Number& T, int genus, const QuadratureConfig& cfg) {
    FluxResult r = flux_of_generator(g, genus, cfg);
    for (auto& v : r.raw) v *= T.value();
    r.cls *= T;
    r.error_estimate *= std::abs(T.value());
    return r;
}

QuadratureResult hamiltonian_integral(double q, double r, bool primed, const Epsilon& eps,
                                      const QuadratureConfig& cfg) {
    using Key = std::tuple<double, double, bool, double, int>;
    static std::map<Key, QuadratureResult> cache;
    static std::mutex mu;
    Key key{q, r, primed, eps.value(), cfg.panels_per_unit};
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    QuadratureResult res = integrate_over_punctured_torus(make_H(q, r, primed, eps), eps, cfg);
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(key, res);
    return res;
}

CalabiValue calabi_of_word(const Word& w, int chart, const SurfaceModel& model, const QuadratureConfig& cfg) {
    if (chart < 0 || chart >= model.genus()) throw std::invalid_argument("region chart out of range");
    for (int j = 0; j < model.genus(); ++j)
        if (j != chart && !w.restricted_to_chart(j).empty())
            throw NotHamiltonianInRegion("word has factors outside chart " + std::to_string(chart + 1));
    Word local = w.restricted_to_chart(chart);
    for (const Letter& l : local.letters())
        if (l.gen.kind() != GenKind::ham && l.gen.kind() != GenKind::ham_prime)
            throw NotHamiltonianInRegion("factor " + l.gen.str() + " carries no generating Hamiltonian");
    FluxResult flux = flux_of_word(local, model.genus(), cfg);
    for (double v : flux.raw)
        if (std::abs(v) > 1e-9) throw NotHamiltonianInRegion("word has nonzero flux; not in Ham of the region");
    CalabiValue out;
    bool exact = true;
    Number exact_sum(0);
    for (const Letter& l : local.letters()) {
        bool primed = l.gen.kind() == GenKind::ham_prime;
        QuadratureResult integral = hamiltonian_integral(l.gen.bump_q(), l.gen.bump_r(), primed, model.epsilon(), cfg);
        CalabiTerm term{l.gen, l.exponent, l.total_time() * l.gen.amplitude(), integral.value, 0.0, std::nullopt};
        term.contribution = term.flow_time * term.integral;
        const Quadruple& q = l.gen.quadruple();
        Number amp = primed ? q.a : q.b;
        Number qeff = primed ? (q.d.is_zero() ? model.epsilon().number() : q.d)
                             : (q.c.is_zero() ? model.epsilon().number() : q.c);
        Number ex = Number(l.exponent) * l.gen.time() * amp * (-qeff);
        if (ex.is_exact()) {
            term.exact_contribution = ex;
            exact_sum += ex;
        } else {
            exact = false;
        }
        out.value += term.contribution;
        out.error_estimate += std::abs(term.flow_time) * integral.error_estimate;
        out.terms.push_back(std::move(term));
    }
    if (exact) out.exact = exact_sum;
    return out;
}

namespace {

// Letters of the oracle alphabet for one chart. K^x = tau sigma^x tau^-1 and
// Kp^x = tau'^-1 sigma'^x tau' are the shears phi_H^{-x}, phi_{H'}^{-x} restricted to the
// strips I_{q,r}; h^x = S^x K^-x and h'^x = Sp^x Kp^-x.
enum class OK { S, K, T, Sp, Kp, Tp };

struct OL {
    OK kind;
    Number amount;
};

bool vertical(OK k) { return k == OK::S || k == OK::K; }
bool horizontal(OK k) { return k == OK::Sp || k == OK::Kp; }

bool commute(OK a, OK b) {
    if (a == b) return true;
    if (vertical(a) && vertical(b)) return true;
    if (horizontal(a) && horizontal(b)) return true;
    if ((vertical(a) && b == OK::Tp) || (vertical(b) && a == OK::Tp)) return true;
    if ((horizontal(a) && b == OK::T) || (horizontal(b) && a == OK::T)) return true;
    return false;
}

std::string_view ok_symbol(OK k) {
    switch (k) {
        case OK::S: return "s";
        case OK::K: return "k";
        case OK::T: return "t";
        case OK::Sp: return "s'";
        case OK::Kp: return "k'";
        case OK::Tp: return "t'";
    }
    return "?";
}

std::string ol_str(const std::vector<OL>& w) {
    if (w.empty()) return "id";
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) s += " ";
        s += std::string(ok_symbol(w[i].kind));
        if (!(w[i].amount == Number(1))) s += "^" + w[i].amount.str();
    }
    return s;
}

/// Merges equal kinds across commuting neighbours and drops zero amounts.
bool merge_pass(std::vector<OL>& w) {
    bool changed = false;
    for (std::size_t i = 0; i < w.size(); ++i) {
        std::size_t j = i + 1;
        while (j < w.size()) {
            if (w[j].kind == w[i].kind) {
                w[i].amount += w[j].amount;
                w.erase(w.begin() + static_cast<long>(j));
                changed = true;
            } else if (commute(w[j].kind, w[i].kind)) {
                ++j;
            } else {
                break;
            }
        }
    }
    auto zero = [](const OL& l) { return l.amount.is_zero(); };
    if (std::any_of(w.begin(), w.end(), zero)) {
        w.erase(std::remove_if(w.begin(), w.end(), zero), w.end());
        changed = true;
    }
    return changed;
}

void merge_all(std::vector<OL>& w) {
    while (merge_pass(w)) {
    }
}

struct BracketRule {
    OK outer;
    int open;  // amount of the opening letter, the closing one is its negative
    OK from;
    OK to;
};

/// outer^open A from^x B outer^-open -> A to^x B, where A and B commute with outer.
bool bracket_pass(std::vector<OL>& w, const std::vector<BracketRule>& rules) {
    for (const BracketRule& r : rules) {
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (w[i].kind != r.outer || !(w[i].amount == Number(r.open))) continue;
            auto skip = [&](std::size_t k) {
                while (k < w.size() && w[k].kind != r.outer && commute(w[k].kind, r.outer)) ++k;
                return k;
            };
            std::size_t j = skip(i + 1);
            if (j == w.size() || w[j].kind != r.from) continue;
            std::size_t k = skip(j + 1);
            if (k == w.size() || w[k].kind != r.outer || !(w[k].amount == Number(-r.open))) continue;
            std::vector<OL> out(w.begin(), w.begin() + static_cast<long>(i));
            out.insert(out.end(), w.begin() + static_cast<long>(i + 1), w.begin() + static_cast<long>(j));
            out.push_back({r.to, w[j].amount});
            out.insert(out.end(), w.begin() + static_cast<long>(j + 1), w.begin() + static_cast<long>(k));
            out.insert(out.end(), w.begin() + static_cast<long>(k + 1), w.end());
            w = std::move(out);
            return true;
        }
    }
    return false;
}

struct Item {
    bool ham;
    bool primed;      // for ham items
    OL letter;        // skeleton letter, or the ham amount in letter.amount
    std::size_t pos;  // for ham items: number of skeleton letters before it
};

struct Factor {
    bool primed;
    Number amount;
    std::size_t pos;
};

bool commutes_with_family(const std::vector<OL>& m, bool primed) {
    for (const OL& l : m) {
        bool ok = primed ? (l.kind == OK::Sp || l.kind == OK::T) : (l.kind == OK::S || l.kind == OK::Tp);
        if (!ok) return false;
    }
    return true;
}

std::vector<OL> slice(const std::vector<OL>& s, std::size_t a, std::size_t b) {
    return {s.begin() + static_cast<long>(a), s.begin() + static_cast<long>(b)};
}

struct ChartReduction {
    std::vector<Factor> factors;
    std::vector<OL> skeleton;
};

ChartReduction reduce_chart(const Word& local, int chart) {
    const Quadruple& q = local.letters().front().gen.quadruple();
    for (const Letter& l : local.letters())
        if (!(l.gen.quadruple() == q))
            throw NotOracleReducible("chart " + std::to_string(chart + 1) + " mixes several quadruples");
    bool b0 = q.b.is_zero(), a0 = q.a.is_zero(), c0 = q.c.is_zero(), d0 = q.d.is_zero();
    std::vector<OL> w;
    for (const Letter& l : local.letters()) {
        Number x = Number(l.exponent) * l.gen.time();
        switch (l.gen.kind()) {
            case GenKind::sigma:
                if (!b0) w.push_back({OK::S, x});
                break;
            case GenKind::sigma_prime:
                if (!a0) w.push_back({OK::Sp, x});
                break;
            case GenKind::tau:
                if (!c0) w.push_back({OK::T, x});
                break;
            case GenKind::tau_prime:
                if (!d0) w.push_back({OK::Tp, x});
                break;
            case GenKind::ham:
                if (!b0) {
                    w.push_back({OK::S, x});
                    w.push_back({OK::K, -x});
                }
                break;
            case GenKind::ham_prime:
                if (!a0) {
                    w.push_back({OK::Sp, x});
                    w.push_back({OK::Kp, -x});
                }
                break;
        }
    }
    std::vector<BracketRule> rules;
    if (!c0) {
        rules.push_back({OK::T, 1, OK::S, OK::K});
        rules.push_back({OK::T, -1, OK::K, OK::S});
    }
    if (!d0) {
        rules.push_back({OK::Tp, -1, OK::Sp, OK::Kp});
        rules.push_back({OK::Tp, 1, OK::Kp, OK::Sp});
    }
    while (merge_pass(w) || bracket_pass(w, rules)) {
    }

    // Split blocks S^x K^y into h^-y S^(x+y) (and likewise for the primed family).
    ChartReduction red;
    std::vector<Factor> raw;
    for (std::size_t i = 0; i < w.size();) {
        if (vertical(w[i].kind) || horizontal(w[i].kind)) {
            bool primed = horizontal(w[i].kind);
            Number x(0), y(0);
            while (i < w.size() && (primed ? horizontal(w[i].kind) : vertical(w[i].kind))) {
                ((w[i].kind == OK::S || w[i].kind == OK::Sp) ? x : y) += w[i].amount;
                ++i;
            }
            if (!y.is_zero()) raw.push_back({primed, -y, red.skeleton.size()});
            Number rest = x + y;
            if (!rest.is_zero()) red.skeleton.push_back({primed ? OK::Sp : OK::S, rest});
        } else {
            red.skeleton.push_back(w[i]);
            ++i;
        }
    }
    std::vector<OL> total = red.skeleton;
    merge_all(total);
    if (!total.empty())
        throw NotOracleReducible("chart " + std::to_string(chart + 1) +
                                 ": the non-Hamiltonian skeleton does not cancel (" + ol_str(total) + ")");

    // Merge neighbouring factors whose conjugators differ by letters commuting with them.
    auto mergeable = [&](const Factor& f, const Factor& g, std::vector<OL> between) {
        if (f.primed != g.primed) return false;
        merge_all(between);
        return commutes_with_family(between, f.primed);
    };
    bool changed = true;
    while (changed) {
        changed = false;
        raw.erase(std::remove_if(raw.begin(), raw.end(), [](const Factor& f) { return f.amount.is_zero(); }),
                  raw.end());
        for (std::size_t i = 0; i + 1 < raw.size(); ++i) {
            if (mergeable(raw[i], raw[i + 1], slice(red.skeleton, raw[i].pos, raw[i + 1].pos))) {
                raw[i].amount += raw[i + 1].amount;
                raw.erase(raw.begin() + static_cast<long>(i + 1));
                changed = true;
                break;
            }
        }
        if (changed || raw.size() < 2) continue;
        // Cyclic neighbours: mu_P is conjugation invariant and the skeleton cancels.
        Factor& first = raw.front();
        Factor& last = raw.back();
        std::vector<OL> wrap = slice(red.skeleton, last.pos, red.skeleton.size());
        auto head = slice(red.skeleton, 0, first.pos);
        wrap.insert(wrap.end(), head.begin(), head.end());
        if (mergeable(last, first, wrap)) {
            first.amount += last.amount;
            raw.pop_back();
            changed = true;
        }
    }
    red.factors = std::move(raw);
    return red;
}

}  // namespace

MuPResult mu_p_oracle(const Word& w, const SurfaceModel& model, const QuadratureConfig& cfg) {
    MuPResult out;
    out.value = Number(0);
    int max_factors = 0;
    for (const Letter& l : w.letters())
        if (l.gen.chart() >= model.genus()) throw std::invalid_argument("word uses a chart beyond the genus");
    for (int chart = 0; chart < model.genus(); ++chart) {
        Word local = w.restricted_to_chart(chart);
        if (local.empty()) continue;
        ChartReduction red = reduce_chart(local, chart);
        const Quadruple& q = local.letters().front().gen.quadruple();
        max_factors = std::max(max_factors, static_cast<int>(red.factors.size()));
        for (const Factor& f : red.factors) {
            OracleFactor of;
            of.chart = chart;
            of.primed = f.primed;
            of.amount = f.amount;
            std::vector<OL> conj = slice(red.skeleton, 0, f.pos);
            merge_all(conj);
            of.conjugator = ol_str(conj);
            Number amp = f.primed ? q.a : q.b;
            Number qeff = f.primed ? (q.d.is_zero() ? model.epsilon().number() : q.d)
                                   : (q.c.is_zero() ? model.epsilon().number() : q.c);
            Number reff = (f.primed ? q.d.is_zero() : q.c.is_zero()) ? model.epsilon().number() : q.delta();
            of.exact_calabi = f.amount * amp * (-qeff);
            QuadratureResult integral = hamiltonian_integral(qeff.value(), reff.value(), f.primed, model.epsilon(), cfg);
            of.numeric_calabi = f.amount.value() * amp.value() * integral.value;
            out.quadrature_error += std::abs(f.amount.value() * amp.value()) * integral.error_estimate;
            out.value += of.exact_calabi;
            out.numeric += of.numeric_calabi;
            out.factors.push_back(std::move(of));
        }
    }
    out.defect_multiple = std::max(0, max_factors - 1);
    return out;
}

std::vector<CommutingPair> commuting_pair_library(const SurfaceModel& model, const std::vector<Quadruple>& quads) {
    if (model.genus() < 2 || quads.size() < 2)
        throw std::invalid_argument("commuting pair library needs genus >= 2 and two quadruples");
    const Epsilon& eps = model.epsilon();
    auto gens = [&](int chart) {
        const Quadruple& q = quads[static_cast<std::size_t>(chart)];
        return std::vector<Generator>{Generator(chart, GenKind::sigma, q, eps), Generator(chart, GenKind::sigma_prime, q, eps),
                                      Generator(chart, GenKind::tau, q, eps), Generator(chart, GenKind::tau_prime, q, eps)};
    };
    std::vector<Generator> g1 = gens(0), g2 = gens(1);
    std::vector<CommutingPair> out;
    for (const Generator& a : g1)
        for (const Generator& b : g2) out.push_back({"disjoint " + a.str() + " / " + b.str(), Word(a), Word(b)});
    for (const Generator& a : g1) {
        Generator half(a.chart(), a.kind(), a.quadruple(), eps, Number::rational(1, 2));
        out.push_back({"common flow " + a.str() + " / " + a.str() + "^-2", Word(a), Word(a).power(-2)});
        out.push_back({"common flow " + a.str() + " / " + half.str(), Word(a), Word(half)});
    }
    for (const auto& g : {g1, g2}) {
        out.push_back({"vertical shear / vertical translation " + g[0].str() + " / " + g[3].str(), Word(g[0]), Word(g[3])});
        out.push_back({"horizontal shear / horizontal translation " + g[1].str() + " / " + g[2].str(), Word(g[1]), Word(g[2])});
    }
    return out;
}

}  // namespace symplab
