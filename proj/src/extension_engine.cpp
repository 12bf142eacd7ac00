#include "symplab/extension_engine.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>

namespace symplab {

namespace {

constexpr double kLatticeTol = 1e-9;

template <int N>
std::vector<std::pair<double, double>> gl_rule() {
    using G = boost::math::quadrature::gauss<double, N>;
    std::vector<std::pair<double, double>> out;
    const auto& x = G::abscissa();
    const auto& w = G::weights();
    // Boost stores the nonnegative half; map to [0, 1].
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0.0) {
            out.emplace_back(0.5, 0.5 * w[i]);
        } else {
            out.emplace_back(0.5 - 0.5 * x[i], 0.5 * w[i]);
            out.emplace_back(0.5 + 0.5 * x[i], 0.5 * w[i]);
        }
    }
    return out;
}

std::vector<std::pair<double, double>> unit_rule(int n) {
    switch (n) {
        case 1: return {{0.5, 1.0}};
        case 2: return gl_rule<2>();
        case 4: return gl_rule<4>();
        case 5: return gl_rule<5>();
        case 8: return gl_rule<8>();
        case 10: return gl_rule<10>();
        case 15: return gl_rule<15>();
        case 20: return gl_rule<20>();
        default: throw std::invalid_argument("supported node counts: 1, 2, 4, 5, 8, 10, 15, 20");
    }
}

std::string qstr(const QVec& v) {
    std::string s = "(";
    for (int i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + ")";
}

}  // namespace

ExtensionProblem ExtensionProblem::continuous(std::string name, std::shared_ptr<const GroupModel> ghat, Subgroup g,
                                              std::function<QVec(const Element&)> q, Eigen::MatrixXd lattice,
                                              std::vector<Element> s1_images,
                                              std::function<Element(const QVec&)> section_b,
                                              std::function<Element(const Element&)> project) {
    ExtensionProblem p;
    p.name_ = std::move(name);
    p.kind_ = Kind::continuous;
    p.ghat_ = std::move(ghat);
    p.g_ = std::move(g);
    p.q_ = std::move(q);
    p.lattice_ = std::move(lattice);
    p.s1_images_ = std::move(s1_images);
    p.section_b_ = std::move(section_b);
    p.project_ = std::move(project);
    if (p.lattice_.rows() != p.lattice_.cols() || std::abs(p.lattice_.determinant()) < 1e-12)
        throw ExtensionError("lattice matrix must be square and invertible");
    p.lattice_inv_ = p.lattice_.inverse();
    p.validate_splitting();
    // q o s2 = id on a grid of B.
    const int k = p.dim();
    for (int n = 0; n < 16; ++n) {
        Eigen::VectorXd t(k);
        for (int i = 0; i < k; ++i) t[i] = ((n * (2 * i + 3)) % 16) / 16.0;
        QVec b = p.lattice_ * t;
        if ((p.q_(p.section_b_(b)) - b).cwiseAbs().maxCoeff() > 1e-12)
            throw ExtensionError("section on B is not a section of q at " + qstr(b));
    }
    return p;
}

ExtensionProblem ExtensionProblem::discrete(std::string name, std::shared_ptr<const GroupModel> ghat, Subgroup g,
                                            std::function<QVec(const Element&)> q, Eigen::MatrixXd lattice,
                                            std::vector<Element> s1_images, std::vector<QVec> cosets,
                                            std::vector<Element> coset_sections) {
    ExtensionProblem p;
    p.name_ = std::move(name);
    p.kind_ = Kind::discrete;
    p.ghat_ = std::move(ghat);
    p.g_ = std::move(g);
    p.q_ = std::move(q);
    p.lattice_ = std::move(lattice);
    p.s1_images_ = std::move(s1_images);
    p.cosets_ = std::move(cosets);
    p.coset_sections_ = std::move(coset_sections);
    if (p.lattice_.rows() != p.lattice_.cols() || std::abs(p.lattice_.determinant()) < 0.5)
        throw ExtensionError("lattice matrix must be square and nonsingular");
    if ((p.lattice_.array() - p.lattice_.array().round()).abs().maxCoeff() > 0)
        throw ExtensionError("lattice of a discrete quotient must be integral");
    p.lattice_inv_ = p.lattice_.inverse();
    p.validate_splitting();
    long index = std::lround(std::abs(p.lattice_.determinant()));
    if (static_cast<long>(p.cosets_.size()) != index || p.coset_sections_.size() != p.cosets_.size())
        throw ExtensionError("need exactly " + std::to_string(index) + " coset representatives with sections");
    for (std::size_t i = 0; i < p.cosets_.size(); ++i) {
        if ((p.q_(p.coset_sections_[i]) - p.cosets_[i]).cwiseAbs().maxCoeff() > 0)
            throw ExtensionError("coset section " + std::to_string(i) + " is not a section of q");
        for (std::size_t j = 0; j < i; ++j) {
            QVec t = p.lattice_inv_ * (p.cosets_[i] - p.cosets_[j]);
            if ((t.array() - t.array().round()).abs().maxCoeff() < kLatticeTol)
                throw ExtensionError("coset representatives " + std::to_string(j) + " and " + std::to_string(i) +
                                     " lie in the same coset");
        }
    }
    return p;
}

void ExtensionProblem::validate_splitting() const {
    const int k = dim();
    if (static_cast<int>(s1_images_.size()) != k) throw ExtensionError("need one s1 image per lattice generator");
    for (int i = 0; i < k; ++i)
        if ((q_(s1_images_[i]) - lattice_.col(i)).cwiseAbs().maxCoeff() > 1e-12)
            throw ExtensionError("q(s1(lambda_" + std::to_string(i + 1) + ")) differs from lambda_" +
                                 std::to_string(i + 1));
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
            const Element& a = s1_images_[i];
            const Element& b = s1_images_[j];
            Element c = ghat_->commutator(a, b);
            if (!(c == ghat_->identity()))
                throw ExtensionError("no homomorphic section on this lattice: [s1(lambda_" + std::to_string(i + 1) +
                                     "), s1(lambda_" + std::to_string(j + 1) + ")] = " + element_str(c) +
                                     " is not the identity");
        }
}

Decomposition ExtensionProblem::decompose(const QVec& x) const {
    Decomposition d;
    const int k = dim();
    if (kind_ == Kind::continuous) {
        QVec t = lattice_inv_ * x;
        d.lambda.resize(k);
        for (int i = 0; i < k; ++i) d.lambda[i] = static_cast<int>(std::floor(t[i]));
        d.b = x - lattice_ * d.lambda.cast<double>();
        return d;
    }
    for (std::size_t i = 0; i < cosets_.size(); ++i) {
        QVec t = lattice_inv_ * (x - cosets_[i]);
        if ((t.array() - t.array().round()).abs().maxCoeff() < kLatticeTol) {
            if (d.coset >= 0) throw ExtensionError("point " + qstr(x) + " lies in two cosets");
            d.coset = static_cast<int>(i);
            d.lambda = t.array().round().cast<int>();
            d.b = cosets_[i];
        }
    }
    if (d.coset < 0) throw ExtensionError("point " + qstr(x) + " lies in no listed coset");
    return d;
}

Element ExtensionProblem::s1(const Eigen::VectorXi& lambda) const {
    Element r = ghat_->identity();
    for (int i = 0; i < dim(); ++i) r = ghat_->multiply(r, ghat_->power(s1_images_[i], lambda[i]));
    return r;
}

Element ExtensionProblem::s2(const Decomposition& d) const {
    return kind_ == Kind::continuous ? section_b_(d.b) : coset_sections_[static_cast<std::size_t>(d.coset)];
}

Element ExtensionProblem::section_eval(const QVec& x) const {
    Decomposition d = decompose(x);
    return ghat_->multiply(s1(d.lambda), s2(d));
}

Element ExtensionProblem::phi_map(const Element& g, const QVec& x) const {
    QVec qg = q(g);
    Element r = ghat_->multiply(ghat_->multiply(g, ghat_->invert(section_eval(x + qg))), section_eval(x));
    return snap_to_g(r, x.cwiseAbs().maxCoeff() + qg.cwiseAbs().maxCoeff(),
                     "Phi(" + element_str(g) + ", " + qstr(x) + ")");
}

Element ExtensionProblem::snap_to_g(const Element& r, double scale, const std::string& what) const {
    if (g_.contains(r)) return r;
    if (project_ && q(r).cwiseAbs().maxCoeff() <= 1e-9 * (1.0 + scale)) {
        Element p = project_(r);
        if (g_.contains(p)) return p;
    }
    throw ExtensionError(what + " = " + element_str(r) + " is not in G");
}

QVec ExtensionProblem::sample_q(std::mt19937_64& rng, double range) const {
    QVec x(dim());
    if (kind_ == Kind::continuous) {
        std::uniform_real_distribution<double> d(-range, range);
        for (int i = 0; i < dim(); ++i) x[i] = std::ldexp(std::round(std::ldexp(d(rng), 20)), -20);
    } else {
        std::uniform_int_distribution<int> d(-static_cast<int>(range), static_cast<int>(range));
        for (int i = 0; i < dim(); ++i) x[i] = d(rng);
    }
    return x;
}

long ExtensionProblem::tiling_failures(long n, std::uint64_t seed) const {
    long failures = 0;
    for (long i = 0; i < n; ++i) {
        std::mt19937_64 rng = seed_stream(seed, static_cast<std::uint64_t>(i));
        QVec x = sample_q(rng, 50);
        try {
            Decomposition d = decompose(x);
            QVec back = lattice_ * d.lambda.cast<double>() + d.b;
            bool in_b = true;
            if (kind_ == Kind::continuous) {
                QVec t = lattice_inv_ * d.b;
                in_b = (t.array() >= -1e-12).all() && (t.array() < 1.0).all();
            }
            if (!in_b || (back - x).cwiseAbs().maxCoeff() > 1e-9) ++failures;
        } catch (const ExtensionError&) {
            ++failures;
        }
    }
    return failures;
}

ExtendedQM::ExtendedQM(QuasimorphismFn phi, std::shared_ptr<const ExtensionProblem> problem, ExtensionConfig cfg)
    : phi_(std::move(phi)), problem_(std::move(problem)), cfg_(cfg) {
    if (!problem_) throw std::invalid_argument("null extension problem");
    if (phi_.known_defect && !std::isfinite(*phi_.known_defect)) throw ExtensionError("non-finite defect");
    unit_rule(cfg_.nodes);  // validates the node count
}

namespace {

// Nodes and weights of the measure on B used by ExtendedQM.
std::vector<std::pair<QVec, double>> nodes_for(const ExtensionProblem& p, const ExtensionConfig& cfg,
                                                 const std::vector<QVec>& offsets) {
    std::vector<std::pair<QVec, double>> out;
    if (p.kind() == ExtensionProblem::Kind::discrete) {
        double w = 1.0 / static_cast<double>(p.index());
        for (const QVec& c : p.cosets()) out.emplace_back(c, w);
        return out;
    }
    const int k = p.dim();
    if (cfg.method == ExtensionConfig::Method::monte_carlo) {
        std::mt19937_64 rng = seed_stream(cfg.seed, 0);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double w = 1.0 / static_cast<double>(cfg.mc_samples);
        for (long i = 0; i < cfg.mc_samples; ++i) {
            QVec t(k);
            for (int j = 0; j < k; ++j) t[j] = u(rng);
            out.emplace_back(p.lattice() * t, w);
        }
        return out;
    }
    // Per coordinate t_i the integrand jumps where t_i + (M^-1 o)_i crosses an integer.
    Eigen::MatrixXd minv = p.lattice().inverse();
    std::vector<std::vector<std::pair<double, double>>> axis(static_cast<std::size_t>(k));
    auto rule = unit_rule(cfg.nodes);
    for (int i = 0; i < k; ++i) {
        std::vector<double> cuts{0.0, 1.0};
        for (const QVec& o : offsets) {
            double u = -(minv * o)[i];
            double frac = u - std::floor(u);
            if (frac > 1e-14 && frac < 1.0 - 1e-14) cuts.push_back(frac);
        }
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
            double a = cuts[c], b = cuts[c + 1];
            for (const auto& [x, w] : rule) axis[i].emplace_back(a + (b - a) * x, (b - a) * w);
        }
    }
    std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
    while (true) {
        QVec t(k);
        double w = 1.0;
        for (int i = 0; i < k; ++i) {
            t[i] = axis[i][idx[i]].first;
            w *= axis[i][idx[i]].second;
        }
        out.emplace_back(p.lattice() * t, w);
        int i = 0;
        while (i < k && ++idx[i] == axis[i].size()) idx[i++] = 0;
        if (i == k) break;
    }
    return out;
}

// Weighted mean computed relative to the first value, so a constant integrand is
// reproduced bit for bit.
double weighted_mean(const std::vector<double>& f, const std::vector<double>& w) {
    double v0 = f.front(), num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        num += w[i] * (f[i] - v0);
        den += w[i];
    }
    return v0 + num / den;
}

}  // namespace

double ExtendedQM::integrate(const std::function<double(const QVec&)>& f, const std::vector<QVec>& offsets) const {
    auto nodes = nodes_for(*problem_, cfg_, offsets);
    std::vector<double> vals, ws;
    vals.reserve(nodes.size());
    ws.reserve(nodes.size());
    for (const auto& [x, w] : nodes) {
        vals.push_back(f(x));
        ws.push_back(w);
    }
    return weighted_mean(vals, ws);
}

double ExtendedQM::evaluate(const Element& g) const { return evaluate_shifted(g, QVec::Zero(problem_->dim())); }

double ExtendedQM::evaluate_shifted(const Element& g, const QVec& a) const {
    QVec qg = problem_->q(g);
    return integrate([&](const QVec& x) { return phi_(problem_->phi_map(g, x + a)); }, {a, QVec(a + qg)});
}

DefectChain ExtendedQM::defect_chain(const Element& g1, const Element& g2, double d, double d_prime) const {
    const ExtensionProblem& p = *problem_;
    const GroupModel& G = p.ghat();
    Element g12 = G.multiply(g1, g2);
    QVec q1 = p.q(g1), q12 = p.q(g12);
    auto nodes = nodes_for(p, cfg_, {QVec::Zero(p.dim()), q1, q12});
    const double scale = q1.cwiseAbs().maxCoeff() + q12.cwiseAbs().maxCoeff();
    auto in_g = [&](const Element& e) { return phi_(p.snap_to_g(e, scale + 1.0 + p.lattice().norm(), "chain element")); };
    std::vector<double> l0, l3, ws;
    double s01 = 0.0, s12 = 0.0, s23 = 0.0;
    for (const auto& [x, w] : nodes) {
        Element sx = p.section_eval(x), sx1 = p.section_eval(x + q1), sx12 = p.section_eval(x + q12);
        Element sx1i = G.invert(sx1), sx12i = G.invert(sx12);
        double a0 = in_g(G.multiply(G.multiply(g12, sx12i), sx));
        double a1 = in_g(G.multiply(G.multiply(sx, g12), sx12i));
        double a2 = in_g(G.multiply(G.multiply(sx, g1), sx1i)) + in_g(G.multiply(G.multiply(sx1, g2), sx12i));
        double a3 = in_g(G.multiply(G.multiply(g1, sx1i), sx)) + in_g(G.multiply(G.multiply(g2, sx12i), sx1));
        s01 = std::max(s01, std::abs(a0 - a1));
        s12 = std::max(s12, std::abs(a1 - a2));
        s23 = std::max(s23, std::abs(a2 - a3));
        l0.push_back(a0);
        l3.push_back(a3);
        ws.push_back(w);
    }
    DefectChain c;
    c.steps.push_back({"phi(g s(x q)^-1 s(x)) ~ phi(s(x) g s(x q)^-1)", s01, d_prime});
    c.steps.push_back({"split at s(x q(g1))", s12, d});
    c.steps.push_back({"conjugate both terms back", s23, 2.0 * d_prime});
    double h1 = evaluate(g1), h2 = evaluate(g2);
    c.averaging_slack = std::abs(weighted_mean(l3, ws) - h1 - h2);
    c.total = std::abs(weighted_mean(l0, ws) - h1 - h2);
    return c;
}

QuasimorphismFn ExtendedQM::as_quasimorphism(std::optional<double> defect_bound) const {
    QuasimorphismFn f;
    f.name = "ext(" + phi_.name + ")";
    auto self = std::make_shared<ExtendedQM>(*this);
    f.eval = [self](const Element& g) { return self->evaluate(g); };
    f.known_defect = defect_bound;
    return f;
}

QuasimorphismFn homogenize_extension(const ExtendedQM& ext, int m_max) {
    QuasimorphismFn f = homogenize(ext.as_quasimorphism(), ext.problem().ghat(), m_max);
    // Keep the model alive for the homogenizer's lifetime.
    auto keep = ext.problem_ptr();
    auto inner = f.eval;
    f.eval = [inner, keep](const Element& g) { return inner(g); };
    return f;
}

std::shared_ptr<const ExtensionProblem> free_times_real_problem(const FreeWord& w) {
    auto m = std::make_shared<FreeByAbelian>(2, 1, FreeByAbelian::Abelian::real);
    auto q = [](const Element& g) { return QVec(Eigen::Map<const Eigen::VectorXd>(g.coords.data(), 1)); };
    Eigen::MatrixXd L(1, 1);
    L << 1.0;
    return std::make_shared<ExtensionProblem>(ExtensionProblem::continuous(
        "F_2 x R / Z", m, free_factor(*m), q, L, {m->make(w, {1.0})},
        [m](const QVec& b) { return m->make({}, {b[0]}); }, [m](const Element& e) { return m->from_word(e.word); }));
}

std::shared_ptr<const ExtensionProblem> free_times_integer_problem() {
    auto m = std::make_shared<FreeByAbelian>(2, 1, FreeByAbelian::Abelian::integer);
    auto q = [](const Element& g) { return QVec(Eigen::Map<const Eigen::VectorXd>(g.coords.data(), 1)); };
    Eigen::MatrixXd L(1, 1);
    L << 1.0;
    return std::make_shared<ExtensionProblem>(ExtensionProblem::discrete(
        "F_2 x Z / Z", m, free_factor(*m), q, L, {m->make({}, {1.0})}, {QVec::Zero(1)}, {m->identity()}));
}

std::shared_ptr<const ExtensionProblem> virtual_split_problem(int k) {
    if (k < 1) throw std::invalid_argument("index must be positive");
    auto m = std::make_shared<FreeByAbelian>(2, 2, FreeByAbelian::Abelian::integer, true);
    auto q = [](const Element& g) { return QVec(Eigen::Map<const Eigen::VectorXd>(g.coords.data(), 2)); };
    Eigen::MatrixXd L(2, 2);
    L << 1.0, 0.0, 0.0, static_cast<double>(k);
    std::vector<QVec> cosets;
    std::vector<Element> sections;
    for (int j = 0; j < k; ++j) {
        QVec c(2);
        c << 0.0, static_cast<double>(j);
        cosets.push_back(c);
        FreeWord u(static_cast<std::size_t>(j), 1);
        if (j % 2) u.push_back(2);
        sections.push_back(m->make(u, {0.0, static_cast<double>(j)}));
    }
    return std::make_shared<ExtensionProblem>(ExtensionProblem::discrete(
        "F_2 semidirect Z^2, index " + std::to_string(k), m, free_factor(*m), q, L,
        {m->make(parse_free_word("ab"), {1.0, 0.0}), m->make({}, {0.0, static_cast<double>(k)})}, cosets, sections));
}

std::shared_ptr<const ExtensionProblem> heisenberg_problem(int p1, int p2) {
    auto h = std::make_shared<Heisenberg>();
    Subgroup center{"center", [](const Element& e) { return e.coords[0] == 0.0 && e.coords[1] == 0.0; },
                    [](std::mt19937_64& rng, int len) {
                        std::uniform_int_distribution<int> d(-len, len);
                        return Heisenberg::make(0, 0, d(rng));
                    }};
    auto q = [](const Element& g) { return QVec(Eigen::Map<const Eigen::VectorXd>(g.coords.data(), 2)); };
    Eigen::MatrixXd L(2, 2);
    L << p1, 0.0, 0.0, p2;
    std::vector<QVec> cosets;
    std::vector<Element> sections;
    for (int i = 0; i < std::abs(p1); ++i)
        for (int j = 0; j < std::abs(p2); ++j) {
            QVec c(2);
            c << i, j;
            cosets.push_back(c);
            sections.push_back(Heisenberg::make(i, j, 0));
        }
    return std::make_shared<ExtensionProblem>(ExtensionProblem::discrete(
        "Heisenberg / center", h, center, q, L, {Heisenberg::make(p1, 0, 0), Heisenberg::make(0, p2, 0)}, cosets,
        sections));
}

}  // namespace symplab
