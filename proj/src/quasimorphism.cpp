#include "symplab/quasimorphism.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

namespace symplab {

FreeWord free_reduce(FreeWord w) {
    FreeWord out;
    out.reserve(w.size());
    for (int l : w) {
        if (l == 0) throw std::invalid_argument("free word letter 0");
        if (!out.empty() && out.back() == -l)
            out.pop_back();
        else
            out.push_back(l);
    }
    return out;
}

FreeWord free_multiply(const FreeWord& x, const FreeWord& y) {
    std::size_t k = 0;
    while (k < x.size() && k < y.size() && x[x.size() - 1 - k] == -y[k]) ++k;
    FreeWord out(x.begin(), x.end() - static_cast<long>(k));
    out.insert(out.end(), y.begin() + static_cast<long>(k), y.end());
    return out;
}

FreeWord free_inverse(const FreeWord& x) {
    FreeWord out(x.rbegin(), x.rend());
    for (int& l : out) l = -l;
    return out;
}

FreeWord cyclic_core(const FreeWord& x, FreeWord* conjugator) {
    std::size_t i = 0, j = x.size();
    while (j - i >= 2 && x[i] == -x[j - 1]) {
        ++i;
        --j;
    }
    if (conjugator) conjugator->assign(x.begin(), x.begin() + static_cast<long>(i));
    return FreeWord(x.begin() + static_cast<long>(i), x.begin() + static_cast<long>(j));
}

std::string free_str(const FreeWord& w) {
    if (w.empty()) return "e";
    std::string s;
    for (int l : w) s += static_cast<char>(l > 0 ? 'a' + l - 1 : 'A' - l - 1);
    return s;
}

FreeWord parse_free_word(std::string_view text) {
    FreeWord w;
    if (text == "e" || text.empty()) return w;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c >= 'a' && c <= 'z' && c != 'e')
            w.push_back(c - 'a' + 1);
        else if (c >= 'A' && c <= 'Z' && c != 'E')
            w.push_back(-(c - 'A' + 1));
        else
            throw std::invalid_argument("bad free-group letter '" + std::string(1, c) + "' at position " +
                                        std::to_string(i + 1) + " in \"" + std::string(text) + "\"");
    }
    return free_reduce(w);
}

std::vector<FreeWord> all_reduced_words(int rank, int max_len) {
    std::vector<FreeWord> out{FreeWord{}};
    std::size_t begin = 0;
    for (int len = 1; len <= max_len; ++len) {
        std::size_t end = out.size();
        for (std::size_t i = begin; i < end; ++i) {
            for (int l = -rank; l <= rank; ++l) {
                if (l == 0) continue;
                const FreeWord& w = out[i];
                if (!w.empty() && w.back() == -l) continue;
                FreeWord v = w;
                v.push_back(l);
                out.push_back(std::move(v));
            }
        }
        begin = end;
    }
    return out;
}

std::string element_str(const Element& e) {
    std::string s = free_str(e.word);
    if (!e.coords.empty()) {
        std::ostringstream os;
        os << "(";
        for (std::size_t i = 0; i < e.coords.size(); ++i) os << (i ? "," : "") << e.coords[i];
        os << ")";
        s += os.str();
    }
    return s;
}

std::mt19937_64 seed_stream(std::uint64_t seed, std::uint64_t index) {
    // splitmix64 finalizer over the combined key
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return std::mt19937_64(z);
}

Element GroupModel::conjugate(const Element& g, const Element& x) const {
    return multiply(multiply(g, x), invert(g));
}

Element GroupModel::commutator(const Element& x, const Element& y) const {
    return multiply(multiply(x, y), multiply(invert(x), invert(y)));
}

Element GroupModel::power(const Element& x, long n) const {
    Element base = n < 0 ? invert(x) : x;
    unsigned long e = static_cast<unsigned long>(n < 0 ? -n : n);
    Element result = identity();
    while (e) {
        if (e & 1UL) result = multiply(result, base);
        e >>= 1;
        if (e) base = multiply(base, base);
    }
    return result;
}

FreeByAbelian::FreeByAbelian(int rank, int k, Abelian kind, bool swap) : rank_(rank), k_(k), kind_(kind), swap_(swap) {
    if (rank < 1 || k < 0) throw std::invalid_argument("FreeByAbelian needs rank >= 1 and k >= 0");
    if (swap && (rank != 2 || k < 1 || kind != Abelian::integer))
        throw std::invalid_argument("the swap action needs F_2 and an integer abelian factor");
}

std::string FreeByAbelian::name() const {
    std::string s = "F_" + std::to_string(rank_);
    if (k_ > 0) s += (swap_ ? " semidirect " : " x ") + std::string(kind_ == Abelian::integer ? "Z" : "R") + "^" +
                     std::to_string(k_);
    return s;
}

Element FreeByAbelian::identity() const { return Element{{}, std::vector<double>(static_cast<std::size_t>(k_), 0.0)}; }

namespace {

FreeWord swapped(const FreeWord& w) {
    FreeWord out = w;
    for (int& l : out) l = l == 1 ? 2 : l == 2 ? 1 : l == -1 ? -2 : -1;
    return out;
}

bool odd(double c) { return std::fmod(std::abs(c), 2.0) == 1.0; }

}  // namespace

Element FreeByAbelian::multiply(const Element& x, const Element& y) const {
    Element out;
    out.word = free_multiply(x.word, (swap_ && odd(x.coords[0])) ? swapped(y.word) : y.word);
    out.coords = x.coords;
    for (int i = 0; i < k_; ++i) out.coords[i] += y.coords[i];
    return out;
}

Element FreeByAbelian::invert(const Element& x) const {
    Element out;
    out.word = free_inverse(x.word);
    if (swap_ && odd(x.coords[0])) out.word = swapped(out.word);
    out.coords = x.coords;
    for (double& c : out.coords) c = -c;
    return out;
}

FreeWord FreeByAbelian::sample_word(std::mt19937_64& rng, int length) const {
    std::uniform_int_distribution<int> len_dist(0, std::max(0, length));
    int n = len_dist(rng);
    FreeWord w;
    std::uniform_int_distribution<int> first(0, 2 * rank_ - 1), next(0, 2 * rank_ - 2);
    auto letter = [this](int idx) { return idx < rank_ ? idx + 1 : -(idx - rank_ + 1); };
    for (int i = 0; i < n; ++i) {
        if (w.empty()) {
            w.push_back(letter(first(rng)));
        } else {
            // idx never reaches the last letter, which stands in for the forbidden inverse
            int l = letter(next(rng));
            if (l == -w.back()) l = letter(2 * rank_ - 1);
            w.push_back(l);
        }
    }
    return w;
}

Element FreeByAbelian::sample(std::mt19937_64& rng, int length) const {
    Element e{sample_word(rng, length), {}};
    for (int i = 0; i < k_; ++i) {
        if (kind_ == Abelian::integer) {
            std::uniform_int_distribution<int> d(-length, length);
            e.coords.push_back(d(rng));
        } else {
            // dyadic grid of spacing 2^-20 keeps sums exact, so group laws hold bitwise
            std::uniform_real_distribution<double> d(-length, length);
            e.coords.push_back(std::ldexp(std::round(std::ldexp(d(rng), 20)), -20));
        }
    }
    return e;
}

Element FreeByAbelian::from_word(const FreeWord& w) const { return Element{free_reduce(w), identity().coords}; }

Element FreeByAbelian::make(const FreeWord& w, std::vector<double> coords) const {
    if (static_cast<int>(coords.size()) != k_) throw std::invalid_argument("abelian part has the wrong dimension");
    return Element{free_reduce(w), std::move(coords)};
}

Element Heisenberg::identity() const { return Element{{}, {0.0, 0.0, 0.0}}; }

Element Heisenberg::multiply(const Element& a, const Element& b) const {
    const auto& x = a.coords;
    const auto& y = b.coords;
    return Element{{}, {x[0] + y[0], x[1] + y[1], x[2] + y[2] + x[0] * y[1]}};
}

Element Heisenberg::invert(const Element& a) const {
    const auto& x = a.coords;
    return Element{{}, {-x[0], -x[1], -x[2] + x[0] * x[1]}};
}

Element Heisenberg::sample(std::mt19937_64& rng, int length) const {
    std::uniform_int_distribution<int> d(-length, length);
    double x = d(rng), y = d(rng), z = d(rng);
    return Element{{}, {x, y, z}};
}

Element Heisenberg::make(long x, long y, long z) {
    return Element{{}, {static_cast<double>(x), static_cast<double>(y), static_cast<double>(z)}};
}

Subgroup free_factor(const FreeByAbelian& model) {
    auto m = std::make_shared<FreeByAbelian>(model);
    return Subgroup{"F_" + std::to_string(model.rank()),
                    [](const Element& e) {
                        return std::all_of(e.coords.begin(), e.coords.end(), [](double c) { return c == 0.0; });
                    },
                    [m](std::mt19937_64& rng, int length) { return m->from_word(m->sample_word(rng, length)); }};
}

Subgroup whole_group(const GroupModel& model) {
    const GroupModel* g = &model;
    return Subgroup{model.name(), [](const Element&) { return true; },
                    [g](std::mt19937_64& rng, int length) { return g->sample(rng, length); }};
}

namespace {

long count_occurrences(const FreeWord& x, const FreeWord& w, bool big) {
    long n = 0;
    const std::size_t k = w.size();
    for (std::size_t i = 0; i + k <= x.size();) {
        if (std::equal(w.begin(), w.end(), x.begin() + static_cast<long>(i))) {
            ++n;
            i += big ? 1 : k;
        } else {
            ++i;
        }
    }
    return n;
}

long cyclic_occurrences(const FreeWord& c, const FreeWord& w) {
    if (c.empty()) return 0;
    long n = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        bool match = true;
        for (std::size_t j = 0; j < w.size() && match; ++j) match = c[(i + j) % c.size()] == w[j];
        n += match;
    }
    return n;
}

double brooks_value(const FreeWord& x, const std::vector<std::pair<double, FreeWord>>& terms) {
    double v = 0.0;
    for (const auto& [c, w] : terms)
        v += c * static_cast<double>(count_occurrences(x, w, true) - count_occurrences(x, free_inverse(w), true));
    return v;
}

double brooks_cyclic_value(const FreeWord& x, const std::vector<std::pair<double, FreeWord>>& terms) {
    FreeWord core = cyclic_core(x);
    double v = 0.0;
    for (const auto& [c, w] : terms)
        v += c * static_cast<double>(cyclic_occurrences(core, w) - cyclic_occurrences(core, free_inverse(w)));
    return v;
}

std::string terms_name(const std::vector<std::pair<double, FreeWord>>& terms) {
    std::ostringstream os;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (i) os << " + ";
        if (terms[i].first != 1.0) os << terms[i].first << "*";
        os << "phi_" << free_str(terms[i].second);
    }
    return os.str();
}

void check_pattern(const FreeWord& w, int rank) {
    if (w.empty()) throw std::invalid_argument("Brooks pattern must be nonempty");
    if (free_reduce(w) != w) throw std::invalid_argument("Brooks pattern must be reduced");
    for (int l : w)
        if (std::abs(l) > rank) throw std::invalid_argument("Brooks pattern uses a letter beyond the rank");
}

}  // namespace

double brooks_exact_defect(const std::vector<std::pair<double, FreeWord>>& terms, int rank) {
    static std::map<std::pair<std::string, int>, double> cache;
    static std::mutex mu;
    std::ostringstream key;
    std::size_t n = 1;
    for (const auto& [c, w] : terms) {
        check_pattern(w, rank);
        key << c << ":" << free_str(w) << ";";
        n = std::max(n, w.size());
    }
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find({key.str(), rank});
        if (it != cache.end()) return it->second;
    }
    std::vector<FreeWord> words = all_reduced_words(rank, static_cast<int>(2 * (n - 1)));
    std::vector<double> values;
    values.reserve(words.size());
    for (const FreeWord& w : words) values.push_back(brooks_value(w, terms));
    double d = 0.0;
    for (std::size_t i = 0; i < words.size(); ++i)
        for (std::size_t j = 0; j < words.size(); ++j)
            d = std::max(d, std::abs(brooks_value(free_multiply(words[i], words[j]), terms) - values[i] - values[j]));
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(std::make_pair(key.str(), rank), d);
    return d;
}

QuasimorphismFn brooks_counting(const FreeWord& w, bool big, int rank) {
    check_pattern(w, rank);
    QuasimorphismFn f;
    f.name = std::string(big ? "phi_" : "little_phi_") + free_str(w);
    FreeWord inv = free_inverse(w);
    f.eval = [w, inv, big](const Element& x) {
        return static_cast<double>(count_occurrences(x.word, w, big) - count_occurrences(x.word, inv, big));
    };
    if (big) f.known_defect = brooks_exact_defect({{1.0, w}}, rank);
    return f;
}

QuasimorphismFn brooks_combination(const std::vector<std::pair<double, FreeWord>>& terms, bool homogeneous, int rank) {
    if (terms.empty()) throw std::invalid_argument("empty Brooks combination");
    double d = brooks_exact_defect(terms, rank);
    QuasimorphismFn f;
    f.name = homogeneous ? "(" + terms_name(terms) + ")_h" : terms_name(terms);
    if (homogeneous) {
        f.eval = [terms](const Element& x) { return brooks_cyclic_value(x.word, terms); };
        f.known_defect = 2.0 * d;
        f.known_homogeneous = true;
    } else {
        f.eval = [terms](const Element& x) { return brooks_value(x.word, terms); };
        f.known_defect = d;
    }
    return f;
}

QuasimorphismFn brooks_homogeneous(const FreeWord& w, int rank) {
    QuasimorphismFn f = brooks_combination({{1.0, w}}, true, rank);
    f.name = "phi_" + free_str(w) + "_h";
    return f;
}

QuasimorphismFn exponent_sum(int letter) {
    if (letter < 1) throw std::invalid_argument("exponent_sum letter is 1-based");
    QuasimorphismFn f;
    f.name = "exp_" + free_str({letter});
    f.eval = [letter](const Element& x) {
        double s = 0;
        for (int l : x.word) s += l == letter ? 1.0 : l == -letter ? -1.0 : 0.0;
        return s;
    };
    f.known_defect = 0.0;
    f.known_homogeneous = true;
    return f;
}

QuasimorphismFn scaled(const QuasimorphismFn& phi, double lambda) {
    QuasimorphismFn f = phi;
    f.name = std::to_string(lambda) + "*" + phi.name;
    auto inner = phi.eval;
    f.eval = [inner, lambda](const Element& x) { return lambda * inner(x); };
    if (phi.known_defect) f.known_defect = std::abs(lambda) * *phi.known_defect;
    f.truncation_error = std::abs(lambda) * phi.truncation_error;
    return f;
}

DefectSample exhaustive_defect(const QuasimorphismFn& phi, int rank, int max_len) {
    std::vector<FreeWord> words = all_reduced_words(rank, max_len);
    std::vector<double> values;
    values.reserve(words.size());
    for (const FreeWord& w : words) values.push_back(phi(Element{w, {}}));
    DefectSample s;
    for (std::size_t i = 0; i < words.size(); ++i)
        for (std::size_t j = 0; j < words.size(); ++j) {
            double d = std::abs(phi(Element{free_multiply(words[i], words[j]), {}}) - values[i] - values[j]);
            ++s.pairs;
            if (d > s.value) {
                s.value = d;
                s.x = Element{words[i], {}};
                s.y = Element{words[j], {}};
            }
        }
    return s;
}

DefectSample estimate_defect(const QuasimorphismFn& phi, const GroupModel& g, long n_pairs, std::uint64_t seed,
                             int length) {
    DefectSample s;
    for (long i = 0; i < n_pairs; ++i) {
        std::mt19937_64 rng = seed_stream(seed, static_cast<std::uint64_t>(i));
        Element x = g.sample(rng, length), y = g.sample(rng, length);
        double d = std::abs(phi(g.multiply(x, y)) - phi(x) - phi(y));
        ++s.pairs;
        if (d > s.value || i == 0) {
            s.value = std::max(s.value, d);
            s.x = x;
            s.y = y;
        }
    }
    return s;
}

DefectSample estimate_invariance_defect(const QuasimorphismFn& phi, const Subgroup& sub, const GroupModel& ghat,
                                        long n, std::uint64_t seed, int length) {
    DefectSample s;
    for (long i = 0; i < n; ++i) {
        std::mt19937_64 rng = seed_stream(seed, static_cast<std::uint64_t>(i));
        Element x = sub.sample(rng, length);
        Element g = ghat.sample(rng, length);
        Element c = ghat.conjugate(g, x);
        if (!sub.contains(x) || !sub.contains(c))
            throw NormalityViolation("conjugate of " + element_str(x) + " by " + element_str(g) + " leaves " +
                                     sub.name);
        double d = std::abs(phi(c) - phi(x));
        ++s.pairs;
        if (d > s.value || i == 0) {
            s.value = std::max(s.value, d);
            s.x = g;
            s.y = x;
        }
    }
    return s;
}

QuasimorphismFn homogenize(const QuasimorphismFn& phi, const GroupModel& g, int m_max) {
    if (m_max < 1) throw std::invalid_argument("m_max must be positive");
    QuasimorphismFn f;
    f.name = phi.name + "_h" + std::to_string(m_max);
    auto inner = phi.eval;
    const GroupModel* model = &g;
    f.eval = [inner, model, m_max](const Element& x) {
        Element xm = model->power(x, m_max);
        return (inner(xm) - inner(model->invert(xm))) / (2.0 * m_max);
    };
    if (phi.known_homogeneous) {
        f.known_homogeneous = true;
        f.known_defect = phi.known_defect;
    } else if (phi.known_defect) {
        double d = *phi.known_defect;
        f.truncation_error = d / m_max;
        // D(phi_h) <= 2 D(phi), and each of the three values moves by at most D/m_max.
        f.known_defect = 2.0 * d + 3.0 * f.truncation_error;
    }
    return f;
}

GammaBoundReport check_gamma_bound(const QuasimorphismFn& phi, const GroupModel& g, const Subgroup& sub, const Element& f,
                          const Element& g_a, const Element& g_b, long m_max, double defect, double homogeneity_tol) {
    auto ev = [&](const Element& x, const char* what) {
        if (!sub.contains(x))
            throw std::invalid_argument(std::string(what) + " = " + element_str(x) + " is not in " + sub.name);
        return phi(x);
    };
    if (!sub.contains(f)) throw std::invalid_argument("f is not in " + sub.name);
    if (!sub.contains(g.multiply(g_a, g_b))) throw std::invalid_argument("g_a g_b is not in " + sub.name);
    // Homogeneity on the designated elements.
    for (const Element* x : {&f}) {
        for (long m = 2; m <= 4; ++m)
            if (std::abs(phi(g.power(*x, m)) - m * phi(*x)) > (m + 1) * homogeneity_tol + 1e-12)
                throw std::invalid_argument("quasimorphism is not homogeneous on f");
    }
    GammaBoundReport rep;
    rep.defect_used = defect;
    for (long m = 1; m <= m_max; ++m) {
        Element fm = g.power(f, m), fmi = g.invert(fm);
        Element ca = g.commutator(fm, g_a);
        Element cb = g.commutator(fm, g.invert(g_b));
        Element gamma = g.multiply(ca, g.invert(cb));
        Element A = g.conjugate(g_a, fmi);
        Element B = g.conjugate(g.invert(g_b), fmi);
        double p_f = ev(fm, "f^m"), p_ca = ev(ca, "[f^m,g_a]"), p_cb = ev(cb, "[f^m,g_b^-1]");
        double p_cbi = ev(g.invert(cb), "[f^m,g_b^-1]^-1"), p_g = ev(gamma, "gamma_m");
        double p_A = ev(A, "g_a f^-m g_a^-1"), p_B = ev(B, "g_b^-1 f^-m g_b");
        GammaBoundRow row;
        row.m = m;
        row.value = p_g;
        row.bound = 3.0 * defect + 2.0 * homogeneity_tol;
        auto step = [&](std::string d, double slack, double allowed) {
            row.steps.push_back({std::move(d), slack, allowed, slack <= allowed + 1e-12});
        };
        step("phi([f^m,g_a]) ~ phi(f^m) + phi(g_a f^-m g_a^-1)", std::abs(p_ca - p_f - p_A), defect);
        step("phi([f^m,g_b^-1]) ~ phi(f^m) + phi(g_b^-1 f^-m g_b)", std::abs(p_cb - p_f - p_B), defect);
        step("phi(g_a f^-m g_a^-1) = phi(g_b^-1 f^-m g_b)", std::abs(p_A - p_B), 2.0 * homogeneity_tol);
        step("phi(gamma_m) ~ phi([f^m,g_a]) + phi([f^m,g_b^-1]^-1)", std::abs(p_g - p_ca - p_cbi), defect);
        step("phi([f^m,g_b^-1]^-1) = -phi([f^m,g_b^-1])", std::abs(p_cbi + p_cb), 2.0 * homogeneity_tol);
        row.pass = std::abs(p_g) <= row.bound + 1e-12;
        for (const auto& s : row.steps) row.pass = row.pass && s.pass;
        rep.pass = rep.pass && row.pass;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

}  // namespace symplab
