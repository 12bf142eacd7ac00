/// @file cli_config.cpp
/// JSON scenario and extension-problem configs: parsing, validation with
/// line:col diagnostics, and the canonical echo written into reports.

#include "symplab/cli.hpp"
#include "symplab/quasimorphism.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace symplab::cli {

namespace {

std::string pointer_escape(const std::string& key) {
    std::string out;
    for (char c : key) {
        if (c == '~')
            out += "~0";
        else if (c == '/')
            out += "~1";
        else
            out += c;
    }
    return out;
}

}  // namespace

JsonLocator::JsonLocator(std::string_view text) : text_(text) {
    const std::size_t n = text_.size();
    auto skip_ws = [&](std::size_t& i) {
        while (i < n && (text_[i] == ' ' || text_[i] == '\t' || text_[i] == '\n' || text_[i] == '\r')) ++i;
    };
    auto read_string = [&](std::size_t& i) {
        std::string s;
        ++i;  // opening quote
        while (i < n && text_[i] != '"') {
            if (text_[i] == '\\' && i + 1 < n) {
                ++i;
                // Only simple escapes matter for key lookup.
                char e = text_[i];
                s += e == 'n' ? '\n' : e == 't' ? '\t' : e;
            } else {
                s += text_[i];
            }
            ++i;
        }
        ++i;  // closing quote
        return s;
    };
    // Iterative scan with an explicit stack of (path, next array index or -1 for objects).
    struct Frame {
        std::string path;
        long index;
    };
    std::vector<Frame> stack;
    std::size_t i = 0;
    std::string path;
    auto value = [&](const std::string& p) {
        skip_ws(i);
        if (i >= n) return;
        offsets_.emplace_back(p, i);
        char c = text_[i];
        if (c == '{' || c == '[') {
            stack.push_back({p, c == '[' ? 0 : -1});
            ++i;
        } else if (c == '"') {
            read_string(i);
        } else {
            while (i < n && std::string_view(",]} \t\r\n").find(text_[i]) == std::string_view::npos) ++i;
        }
    };
    value("");
    while (!stack.empty() && i < n) {
        skip_ws(i);
        if (i >= n) break;
        char c = text_[i];
        if (c == '}' || c == ']') {
            stack.pop_back();
            ++i;
            continue;
        }
        if (c == ',') {
            ++i;
            continue;
        }
        Frame& f = stack.back();
        if (f.index < 0) {
            std::string key = read_string(i);
            skip_ws(i);
            if (i < n && text_[i] == ':') ++i;
            std::string p = f.path + "/" + pointer_escape(key);
            value(p);
        } else {
            std::string p = f.path + "/" + std::to_string(f.index++);
            value(p);
        }
    }
}

std::pair<int, int> JsonLocator::position_of_offset(std::size_t offset) const {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < offset && i < text_.size(); ++i) {
        if (text_[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

std::pair<int, int> JsonLocator::position(const std::string& pointer) const {
    std::string p = pointer;
    for (;;) {
        for (const auto& [path, off] : offsets_)
            if (path == p) return position_of_offset(off);
        if (p.empty()) return {1, 1};
        p.erase(p.rfind('/'));
    }
}

Json parse_json(std::string_view text, const std::string& source) {
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        JsonLocator loc(text);
        auto [line, col] = loc.position_of_offset(e.byte > 0 ? e.byte - 1 : 0);
        std::string what = e.what();
        // Drop the library's own "[json.exception...] parse error at line L, column C: " prefix.
        auto col_at = what.find("column");
        auto cut = col_at == std::string::npos ? std::string::npos : what.find(": ", col_at);
        std::string msg = cut == std::string::npos ? what : what.substr(cut + 2);
        throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
    }
}

namespace {

/// Typed access to a parsed config with positioned errors.
class Reader {
public:
    Reader(std::string_view text, std::string source)
        : source_(std::move(source)), root_(parse_json(text, source_)), loc_(text) {
        if (!root_.is_object()) fail("", "top level must be an object");
    }

    [[noreturn]] void fail(const std::string& ptr, const std::string& msg) const {
        auto [line, col] = loc_.position(ptr);
        throw ConfigError(source_ + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg +
                          (ptr.empty() ? "" : " (at " + ptr + ")"));
    }

    const Json& root() const { return root_; }

    const Json& at(const std::string& ptr) const { return root_.at(Json::json_pointer(ptr)); }
    bool has(const std::string& ptr) const { return root_.contains(Json::json_pointer(ptr)); }

    /// Requires an object at ptr whose keys all lie in `allowed`.
    void object(const std::string& ptr, const std::set<std::string>& allowed) const {
        const Json& j = at(ptr);
        if (!j.is_object()) fail(ptr, "expected an object");
        for (const auto& [k, v] : j.items())
            if (!allowed.count(k)) fail(ptr + "/" + pointer_escape(k), "unknown key '" + k + "'");
    }

    void require(const std::string& ptr) const {
        if (!has(ptr)) fail(ptr, "missing required key '" + ptr.substr(ptr.rfind('/') + 1) + "'");
    }

    /// Strings go through Number::parse; JSON numbers are read as the decimal they print as.
    Number number(const std::string& ptr) const {
        const Json& j = at(ptr);
        std::string text;
        if (j.is_string())
            text = j.get<std::string>();
        else if (j.is_number())
            text = j.dump();
        else
            fail(ptr, "expected a number or a numeric string");
        try {
            return Number::parse(text);
        } catch (const std::exception& e) {
            fail(ptr, std::string("bad number: ") + e.what());
        }
    }

    double real(const std::string& ptr, double lo, double hi) const {
        double v = number(ptr).value();
        if (!(v >= lo && v <= hi)) fail(ptr, "value " + fmt(v) + " outside [" + fmt(lo) + ", " + fmt(hi) + "]");
        return v;
    }

    long integer(const std::string& ptr, long lo, long hi) const {
        const Json& j = at(ptr);
        if (!j.is_number_integer()) fail(ptr, "expected an integer");
        long v = j.get<long>();
        if (v < lo || v > hi)
            fail(ptr, "value " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        return v;
    }

    std::string string(const std::string& ptr) const {
        const Json& j = at(ptr);
        if (!j.is_string()) fail(ptr, "expected a string");
        return j.get<std::string>();
    }

    bool boolean(const std::string& ptr) const {
        const Json& j = at(ptr);
        if (!j.is_boolean()) fail(ptr, "expected true or false");
        return j.get<bool>();
    }

    std::size_t array(const std::string& ptr) const {
        const Json& j = at(ptr);
        if (!j.is_array()) fail(ptr, "expected an array");
        return j.size();
    }

    static std::string fmt(double v) {
        Json j = v;
        return j.dump();
    }

private:
    std::string source_;
    Json root_;
    JsonLocator loc_;
};

/// Parses a word over a, b and their inverses.
FreeWord read_f2_word(const Reader& r, const std::string& ptr) {
    std::string w = r.string(ptr);
    FreeWord fw;
    try {
        fw = parse_free_word(w);
    } catch (const std::invalid_argument& e) {
        r.fail(ptr, e.what());
    }
    for (int l : fw)
        if (std::abs(l) > 2) r.fail(ptr, "only a, b, A, B are allowed in \"" + w + "\"");
    return fw;
}

std::uint64_t read_seed(const Reader& r) {
    if (!r.has("/seed")) return 1;
    const Json& j = r.at("/seed");
    if (!j.is_number_unsigned()) r.fail("/seed", "seed must be a non-negative integer");
    return j.get<std::uint64_t>();
}

double read_scale(double s) {
    if (!(s >= 0.0) || !std::isfinite(s))
        throw ConfigError("--tolerance-scale: must be a finite non-negative number");
    return s;
}

Json number_list(const std::vector<Number>& xs) {
    Json a = Json::array();
    for (const auto& x : xs) a.push_back(x.str());
    return a;
}

}  // namespace

Scenario load_scenario(std::string_view text, const std::string& source, std::optional<std::uint64_t> seed,
                       double tolerance_scale) {
    const double scale = read_scale(tolerance_scale);
    Reader r(text, source);
    r.object("", {"surface", "quadruples", "m_range", "theorem", "tolerances", "resolution", "quasimorphisms", "seed"});
    r.require("/surface");
    r.object("/surface", {"genus", "area", "epsilon"});
    r.require("/surface/genus");
    const int genus = static_cast<int>(r.integer("/surface/genus", 2, 64));
    const Number area = r.has("/surface/area") ? r.number("/surface/area") : Number(1);
    if (!(area > Number(0))) r.fail("/surface/area", "area must be positive");

    Scenario s;
    s.source = source;
    try {
        if (r.has("/surface/epsilon"))
            s.model = SurfaceModel(genus, Epsilon(r.number("/surface/epsilon")), area);
        else
            s.model = SurfaceModel(genus, area);
    } catch (const std::invalid_argument& e) {
        r.fail(r.has("/surface/epsilon") ? "/surface/epsilon" : "/surface", e.what());
    }
    const Epsilon& eps = s.model.epsilon();
    const Number& e_num = eps.number();

    auto check_small = [&](const Number& x, const std::string& ptr, const std::string& what) {
        if (abs(x) > e_num)
            r.fail(ptr, "|" + what + "| = " + abs(x).str() + " exceeds epsilon = " + e_num.str());
    };

    if (r.has("/quadruples")) {
        std::size_t n = r.array("/quadruples");
        if (n != static_cast<std::size_t>(genus))
            r.fail("/quadruples", "expected one quadruple per chart (" + std::to_string(genus) + "), got " +
                                      std::to_string(n));
        for (std::size_t j = 0; j < n; ++j) {
            std::string p = "/quadruples/" + std::to_string(j);
            r.object(p, {"a", "b", "c", "d"});
            Quadruple q;
            for (const char* key : {"a", "b", "c", "d"}) r.require(p + "/" + key);
            q.a = r.number(p + "/a");
            q.b = r.number(p + "/b");
            q.c = r.number(p + "/c");
            q.d = r.number(p + "/d");
            check_small(q.c, p + "/c", "c");
            check_small(q.d, p + "/d", "d");
            s.quads.push_back(q);
        }
    }

    if (r.has("/m_range")) {
        if (r.array("/m_range") != 2) r.fail("/m_range", "expected [first, last]");
        s.m_lo = r.integer("/m_range/0", 1, 1000);
        s.m_hi = r.integer("/m_range/1", s.m_lo, 1000);
    }

    if (r.has("/theorem")) {
        r.object("/theorem", {"v", "w", "k"});
        TheoremInput t{CohomologyClass(genus), CohomologyClass(genus), 0, 0};
        for (const char* key : {"v", "w"}) {
            std::string p = std::string("/theorem/") + key;
            r.require(p);
            if (r.array(p) != 2 * static_cast<std::size_t>(genus))
                r.fail(p, "expected " + std::to_string(2 * genus) + " coefficients (a_1, b_1, ..., a_l, b_l)");
            std::vector<Number> c;
            for (int i = 0; i < 2 * genus; ++i) c.push_back(r.number(p + "/" + std::to_string(i)));
            (key[0] == 'v' ? t.v_bar : t.w_bar) = CohomologyClass(genus, c);
        }
        t.k0 = k0_bound(genus, max_norm(t.w_bar), area);
        r.require("/theorem/k");
        if (r.at("/theorem/k").is_string()) {
            if (r.string("/theorem/k") != "k0") r.fail("/theorem/k", "k must be an integer or \"k0\"");
            t.k = t.k0;
        } else {
            t.k = r.integer("/theorem/k", 1, std::numeric_limits<int>::max());
        }
        if (t.k < t.k0)
            r.fail("/theorem/k", "k = " + std::to_string(t.k) + " is below k0 = " + std::to_string(t.k0));
        const Number kn(t.k);
        std::vector<Quadruple> derived;
        for (int j = 0; j < genus; ++j) {
            Quadruple q{t.v_bar.alpha(j), t.v_bar.beta(j), t.w_bar.alpha(j) / kn, t.w_bar.beta(j) / kn};
            // k >= k0 forces |c_j|, |d_j| <= eps only when area <= 1 or |w_bar|_max <= 1.
            for (const auto& [x, name] : {std::pair{q.c, "c_"}, std::pair{q.d, "d_"}})
                if (abs(x) > e_num)
                    r.fail("/theorem/k", "|" + std::string(name) + std::to_string(j + 1) + "| = " + abs(x).str() +
                                             " exceeds epsilon = " + e_num.str() + " although k >= k0 = " +
                                             std::to_string(t.k0) + " (area > 1 and |w_bar|_max > 1 need a larger k)");
            derived.push_back(q);
        }
        if (s.quads.empty()) s.quads = derived;
        s.theorem = t;
    }
    if (s.quads.empty()) r.fail("", "need 'quadruples' or a 'theorem' block");

    if (r.has("/tolerances")) {
        r.object("/tolerances", {"hamiltonian_integral", "flux", "maps", "calabi", "oracle", "gamma_flux", "cup",
                                 "jacobian", "area", "strip", "qm"});
        auto rd = [&](const char* key, double& dst) {
            std::string p = std::string("/tolerances/") + key;
            if (r.has(p)) dst = r.real(p, 0.0, 1.0);
        };
        rd("hamiltonian_integral", s.tol.hamiltonian_integral);
        rd("flux", s.tol.flux);
        rd("maps", s.tol.maps);
        rd("calabi", s.tol.calabi);
        rd("oracle", s.tol.oracle);
        rd("gamma_flux", s.tol.gamma_flux);
        rd("cup", s.tol.cup);
        rd("jacobian", s.tol.jacobian);
        rd("area", s.tol.area);
        rd("strip", s.tol.strip);
        rd("qm", s.tol.qm);
    }
    for (double* t : {&s.tol.hamiltonian_integral, &s.tol.flux, &s.tol.maps, &s.tol.calabi, &s.tol.oracle,
                      &s.tol.gamma_flux, &s.tol.cup, &s.tol.jacobian, &s.tol.area, &s.tol.strip, &s.tol.qm})
        *t *= scale;

    if (r.has("/resolution")) {
        r.object("/resolution", {"grid", "commuting_grid", "panels", "jacobian_samples", "area_squares", "area_side",
                                 "plot_grid", "strip_grid"});
        auto ri = [&](const char* key, int& dst, long lo, long hi) {
            std::string p = std::string("/resolution/") + key;
            if (r.has(p)) dst = static_cast<int>(r.integer(p, lo, hi));
        };
        ri("grid", s.res.grid, 1, 1024);
        ri("commuting_grid", s.res.commuting_grid, 1, 1024);
        ri("panels", s.res.panels, 1, 200);
        ri("jacobian_samples", s.res.jacobian_samples, 0, 100000);
        ri("area_squares", s.res.area_squares, 0, 10000);
        ri("plot_grid", s.res.plot_grid, 2, 256);
        ri("strip_grid", s.res.strip_grid, 2, 1024);
        if (r.has("/resolution/area_side")) s.res.area_side = r.real("/resolution/area_side", 1e-6, 1e-2);
    }

    if (r.has("/quasimorphisms")) {
        r.object("/quasimorphisms", {"words", "pairs", "exhaustive_length", "sample_length"});
        if (r.has("/quasimorphisms/words")) {
            s.qm.words.clear();
            std::size_t n = r.array("/quasimorphisms/words");
            for (std::size_t i = 0; i < n; ++i) {
                std::string p = "/quasimorphisms/words/" + std::to_string(i);
                if (read_f2_word(r, p).empty()) r.fail(p, "word reduces to the identity");
                s.qm.words.push_back(r.string(p));
            }
        }
        if (r.has("/quasimorphisms/pairs")) s.qm.pairs = r.integer("/quasimorphisms/pairs", 0, 10'000'000);
        if (r.has("/quasimorphisms/exhaustive_length"))
            s.qm.exhaustive_length = static_cast<int>(r.integer("/quasimorphisms/exhaustive_length", 0, 7));
        if (r.has("/quasimorphisms/sample_length"))
            s.qm.sample_length = static_cast<int>(r.integer("/quasimorphisms/sample_length", 1, 1000));
    }

    s.seed = seed ? *seed : read_seed(r);

    Json& e = s.echo;
    e["surface"] = {{"genus", genus}, {"area", area.str()}, {"epsilon", e_num.str()}};
    Json qs = Json::array();
    for (const auto& q : s.quads) qs.push_back({{"a", q.a.str()}, {"b", q.b.str()}, {"c", q.c.str()}, {"d", q.d.str()}});
    e["quadruples"] = qs;
    e["m_range"] = {s.m_lo, s.m_hi};
    if (s.theorem)
        e["theorem"] = {{"v", number_list(s.theorem->v_bar.coeffs())},
                        {"w", number_list(s.theorem->w_bar.coeffs())},
                        {"k", s.theorem->k},
                        {"k0", s.theorem->k0}};
    e["tolerances"] = {{"hamiltonian_integral", s.tol.hamiltonian_integral},
                       {"flux", s.tol.flux},
                       {"maps", s.tol.maps},
                       {"calabi", s.tol.calabi},
                       {"oracle", s.tol.oracle},
                       {"gamma_flux", s.tol.gamma_flux},
                       {"cup", s.tol.cup},
                       {"jacobian", s.tol.jacobian},
                       {"area", s.tol.area},
                       {"strip", s.tol.strip},
                       {"qm", s.tol.qm}};
    e["tolerance_scale"] = scale;
    e["resolution"] = {{"grid", s.res.grid},
                       {"commuting_grid", s.res.commuting_grid},
                       {"panels", s.res.panels},
                       {"jacobian_samples", s.res.jacobian_samples},
                       {"area_squares", s.res.area_squares},
                       {"area_side", s.res.area_side},
                       {"plot_grid", s.res.plot_grid},
                       {"strip_grid", s.res.strip_grid}};
    e["quasimorphisms"] = {{"words", s.qm.words},
                           {"pairs", s.qm.pairs},
                           {"exhaustive_length", s.qm.exhaustive_length},
                           {"sample_length", s.qm.sample_length}};
    e["seed"] = s.seed;
    return s;
}

ExtendConfig load_extend_config(std::string_view text, const std::string& source, std::optional<std::uint64_t> seed,
                                double tolerance_scale) {
    const double scale = read_scale(tolerance_scale);
    Reader r(text, source);
    r.object("", {"problem", "quasimorphism", "engine", "samples", "slack", "seed"});
    ExtendConfig c;
    c.source = source;
    r.require("/problem");
    r.object("/problem", {"kind", "word", "index", "lattice"});
    r.require("/problem/kind");
    c.kind = r.string("/problem/kind");
    static const std::set<std::string> kinds{"free_times_real", "free_times_integer", "virtual_split", "heisenberg"};
    if (!kinds.count(c.kind))
        r.fail("/problem/kind", "unknown problem kind '" + c.kind +
                                    "' (free_times_real, free_times_integer, virtual_split, heisenberg)");
    auto only_for = [&](const char* key, const char* kind) {
        std::string p = std::string("/problem/") + key;
        if (r.has(p) && c.kind != kind) r.fail(p, std::string("'") + key + "' only applies to " + kind);
    };
    only_for("word", "free_times_real");
    only_for("index", "virtual_split");
    only_for("lattice", "heisenberg");
    if (r.has("/problem/word")) {
        (void)read_f2_word(r, "/problem/word");
        c.word = r.string("/problem/word");
    }
    if (r.has("/problem/index")) c.index = static_cast<int>(r.integer("/problem/index", 1, 64));
    if (r.has("/problem/lattice")) {
        if (r.array("/problem/lattice") != 2) r.fail("/problem/lattice", "expected [p1, p2]");
        c.heisenberg_lattice = {static_cast<int>(r.integer("/problem/lattice/0", 1, 64)),
                                static_cast<int>(r.integer("/problem/lattice/1", 1, 64))};
    }

    if (r.has("/quasimorphism")) {
        r.object("/quasimorphism", {"terms", "homogeneous"});
        if (r.has("/quasimorphism/terms")) {
            c.terms.clear();
            std::size_t n = r.array("/quasimorphism/terms");
            if (n == 0) r.fail("/quasimorphism/terms", "need at least one term");
            for (std::size_t i = 0; i < n; ++i) {
                std::string p = "/quasimorphism/terms/" + std::to_string(i);
                r.object(p, {"coefficient", "word"});
                r.require(p + "/word");
                double coef = r.has(p + "/coefficient") ? r.real(p + "/coefficient", -1e6, 1e6) : 1.0;
                if (read_f2_word(r, p + "/word").empty()) r.fail(p + "/word", "word reduces to the identity");
                c.terms.emplace_back(coef, r.string(p + "/word"));
            }
        }
        if (r.has("/quasimorphism/homogeneous")) c.homogeneous = r.boolean("/quasimorphism/homogeneous");
    }

    if (r.has("/engine")) {
        r.object("/engine", {"method", "nodes", "mc_samples"});
        if (r.has("/engine/method")) {
            c.method = r.string("/engine/method");
            if (c.method != "gauss" && c.method != "monte_carlo")
                r.fail("/engine/method", "method must be \"gauss\" or \"monte_carlo\"");
        }
        if (r.has("/engine/nodes")) c.nodes = static_cast<int>(r.integer("/engine/nodes", 1, 20));
        if (r.has("/engine/mc_samples")) c.mc_samples = r.integer("/engine/mc_samples", 1, 100'000'000);
    }

    if (r.has("/samples")) {
        r.object("/samples", {"restriction", "defect_pairs", "shifts", "chains", "invariance", "length"});
        if (r.has("/samples/restriction")) c.restriction_samples = r.integer("/samples/restriction", 0, 10'000'000);
        if (r.has("/samples/defect_pairs")) c.defect_pairs = r.integer("/samples/defect_pairs", 0, 10'000'000);
        if (r.has("/samples/shifts")) c.shifts = r.integer("/samples/shifts", 0, 10'000'000);
        if (r.has("/samples/chains")) c.chains = r.integer("/samples/chains", 0, 10'000'000);
        if (r.has("/samples/invariance")) c.invariance_samples = r.integer("/samples/invariance", 0, 10'000'000);
        if (r.has("/samples/length")) c.length = static_cast<int>(r.integer("/samples/length", 1, 1000));
    }
    if (r.has("/slack")) c.slack = r.real("/slack", 0.0, 1.0);
    c.slack *= scale;
    c.seed = seed ? *seed : read_seed(r);

    Json problem = {{"kind", c.kind}};
    if (c.kind == "free_times_real") problem["word"] = c.word;
    if (c.kind == "virtual_split") problem["index"] = c.index;
    if (c.kind == "heisenberg") problem["lattice"] = c.heisenberg_lattice;
    Json terms = Json::array();
    for (const auto& [coef, w] : c.terms) terms.push_back({{"coefficient", coef}, {"word", w}});
    c.echo["problem"] = problem;
    c.echo["quasimorphism"] = {{"terms", terms}, {"homogeneous", c.homogeneous}};
    c.echo["engine"] = {{"method", c.method}, {"nodes", c.nodes}, {"mc_samples", c.mc_samples}};
    c.echo["samples"] = {{"restriction", c.restriction_samples},
                         {"defect_pairs", c.defect_pairs},
                         {"shifts", c.shifts},
                         {"chains", c.chains},
                         {"invariance", c.invariance_samples},
                         {"length", c.length}};
    c.echo["slack"] = c.slack;
    c.echo["tolerance_scale"] = scale;
    c.echo["seed"] = c.seed;
    return c;
}

std::string_view default_scenario_text() {
    return R"({
  "surface": {"genus": 2, "area": "1", "epsilon": "1/16"},
  "quadruples": [
    {"a": "1", "b": "1", "c": "0.05", "d": "0.03"},
    {"a": "1", "b": "1", "c": "0.05", "d": "0.03"}
  ],
  "m_range": [1, 8],
  "theorem": {"v": ["1", "0", "0", "0"], "w": ["0", "1", "0", "0"], "k": "k0"},
  "tolerances": {
    "hamiltonian_integral": 1e-8, "flux": 1e-6, "maps": 1e-6, "calabi": 1e-8, "oracle": 1e-7,
    "gamma_flux": 1e-9, "cup": 1e-9, "jacobian": 1e-6, "area": 1e-4, "strip": 1e-12, "qm": 1e-9
  },
  "resolution": {
    "grid": 64, "commuting_grid": 16, "panels": 20, "jacobian_samples": 500,
    "area_squares": 20, "area_side": 5e-4, "plot_grid": 24, "strip_grid": 64
  },
  "quasimorphisms": {"words": ["ab", "aab", "abAB"], "pairs": 10000, "exhaustive_length": 6, "sample_length": 12},
  "seed": 1
}
)";
}

std::string_view default_extend_text() {
    return R"({
  "problem": {"kind": "free_times_real", "word": "ab"},
  "quasimorphism": {"terms": [{"coefficient": 1, "word": "aab"}], "homogeneous": true},
  "engine": {"method": "gauss", "nodes": 8, "mc_samples": 4096},
  "samples": {"restriction": 100, "defect_pairs": 10000, "shifts": 50, "chains": 20, "invariance": 2000, "length": 12},
  "slack": 1e-9,
  "seed": 1
}
)";
}

}  // namespace symplab::cli
