#pragma once
/// @file quasimorphism.hpp
/// Discrete group models, Brooks counting quasimorphisms, defect estimation,
/// truncated homogenization and the gamma_m inequality checker.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace symplab {

/// Reduced word in a free group; letter i > 0 is the i-th generator, -i its inverse.
using FreeWord = std::vector<int>;

FreeWord free_reduce(FreeWord w);
FreeWord free_multiply(const FreeWord& x, const FreeWord& y);
FreeWord free_inverse(const FreeWord& x);
/// x = u c u^-1 with c cyclically reduced; returns c and sets *conjugator to u.
FreeWord cyclic_core(const FreeWord& x, FreeWord* conjugator = nullptr);
/// Letters a, b, c, ... for generators and A, B, C, ... for inverses; "e" for the identity.
std::string free_str(const FreeWord& w);
FreeWord parse_free_word(std::string_view text);
/// All reduced words of length <= max_len over `rank` generators, shortest first.
std::vector<FreeWord> all_reduced_words(int rank, int max_len);

/// Element of F_n x A where A is Z^k, R^k or a Heisenberg group; coords hold the A part.
struct Element {
    FreeWord word;
    std::vector<double> coords;
    friend bool operator==(const Element& a, const Element& b) { return a.word == b.word && a.coords == b.coords; }
};

std::string element_str(const Element& e);

/// Independent deterministic random streams: stream(seed, i) depends only on (seed, i).
std::mt19937_64 seed_stream(std::uint64_t seed, std::uint64_t index);

class GroupModel {
public:
    virtual ~GroupModel() = default;
    [[nodiscard]] virtual std::string name() const = 0;
    [[nodiscard]] virtual Element identity() const = 0;
    [[nodiscard]] virtual Element multiply(const Element& x, const Element& y) const = 0;
    [[nodiscard]] virtual Element invert(const Element& x) const = 0;
    /// Random element whose free part has length <= length and abelian part bounded by length.
    [[nodiscard]] virtual Element sample(std::mt19937_64& rng, int length) const = 0;

    [[nodiscard]] Element conjugate(const Element& g, const Element& x) const;
    [[nodiscard]] Element commutator(const Element& x, const Element& y) const;
    [[nodiscard]] Element power(const Element& x, long n) const;
};

/// F_rank x A with A = Z^k or R^k. With `swap` (rank 2, integer A) the first
/// coordinate acts on F_2 through the automorphism a <-> b, giving F_2 semidirect Z^k.
class FreeByAbelian : public GroupModel {
public:
    enum class Abelian { integer, real };
    FreeByAbelian(int rank, int k, Abelian kind = Abelian::integer, bool swap = false);

    [[nodiscard]] std::string name() const override;
    [[nodiscard]] Element identity() const override;
    [[nodiscard]] Element multiply(const Element& x, const Element& y) const override;
    [[nodiscard]] Element invert(const Element& x) const override;
    [[nodiscard]] Element sample(std::mt19937_64& rng, int length) const override;

    [[nodiscard]] int rank() const { return rank_; }
    [[nodiscard]] int abelian_rank() const { return k_; }
    [[nodiscard]] Abelian kind() const { return kind_; }
    [[nodiscard]] bool swaps() const { return swap_; }
    /// Embeds a free word with zero abelian part.
    [[nodiscard]] Element from_word(const FreeWord& w) const;
    [[nodiscard]] Element make(const FreeWord& w, std::vector<double> coords) const;
    /// Random reduced word of length <= length.
    [[nodiscard]] FreeWord sample_word(std::mt19937_64& rng, int length) const;

private:
    int rank_;
    int k_;
    Abelian kind_;
    bool swap_;
};

/// Integer Heisenberg group, coords (x, y, z) with (x,y,z)(x',y',z') = (x+x', y+y', z+z'+x y').
class Heisenberg : public GroupModel {
public:
    [[nodiscard]] std::string name() const override { return "Heisenberg(Z)"; }
    [[nodiscard]] Element identity() const override;
    [[nodiscard]] Element multiply(const Element& x, const Element& y) const override;
    [[nodiscard]] Element invert(const Element& x) const override;
    [[nodiscard]] Element sample(std::mt19937_64& rng, int length) const override;
    [[nodiscard]] static Element make(long x, long y, long z);
};

/// A subgroup given by membership and a sampler (elements in the ambient representation).
struct Subgroup {
    std::string name;
    std::function<bool(const Element&)> contains;
    std::function<Element(std::mt19937_64&, int)> sample;
};

/// F_rank x {0} inside a FreeByAbelian model.
Subgroup free_factor(const FreeByAbelian& model);
/// Whole group as a subgroup of itself.
Subgroup whole_group(const GroupModel& model);

struct QuasimorphismFn {
    std::string name;
    std::function<double(const Element&)> eval;
    /// Certified upper bound on the defect, when one is known.
    std::optional<double> known_defect;
    bool known_homogeneous = false;
    /// For truncated homogenizations: sup |value - true homogenization|.
    double truncation_error = 0.0;

    double operator()(const Element& x) const { return eval(x); }
};

/// Brooks counting function: occurrences of w minus occurrences of w^-1 in the reduced
/// free part. big = true counts overlapping occurrences, otherwise a greedy
/// non-overlapping left-to-right count. For big counts over F_rank the exact defect
/// is attached (see brooks_exact_defect).
QuasimorphismFn brooks_counting(const FreeWord& w, bool big = true, int rank = 2);
/// Exact homogenization of a big Brooks function: cyclic occurrences in the cyclic core.
QuasimorphismFn brooks_homogeneous(const FreeWord& w, int rank = 2);
/// Linear combination sum_i c_i phi_{w_i} of big counting functions (homogeneous if requested).
QuasimorphismFn brooks_combination(const std::vector<std::pair<double, FreeWord>>& terms, bool homogeneous,
                                   int rank = 2);
/// Exact defect of sum_i c_i phi_{w_i} (big counts) over F_rank. The defect term
/// phi(xy) - phi(x) - phi(y) only depends on the letters within n-1 of the three
/// cancellation junctions (n = longest pattern), so pairs of length <= 2(n-1) realize
/// the supremum.
double brooks_exact_defect(const std::vector<std::pair<double, FreeWord>>& terms, int rank = 2);
/// Exponent sum of generator `letter` (1-based): a homomorphism.
QuasimorphismFn exponent_sum(int letter);
QuasimorphismFn scaled(const QuasimorphismFn& phi, double lambda);

struct DefectSample {
    double value = 0.0;  ///< max |phi(xy) - phi(x) - phi(y)| seen (a lower bound on D)
    Element x, y;
    long pairs = 0;
};

/// Exhaustive maximum over all pairs of reduced free words of length <= max_len.
DefectSample exhaustive_defect(const QuasimorphismFn& phi, int rank, int max_len);
/// Maximum over n_pairs sampled pairs; pair i uses seed_stream(seed, i).
DefectSample estimate_defect(const QuasimorphismFn& phi, const GroupModel& g, long n_pairs, std::uint64_t seed,
                             int length = 40);

class NormalityViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Max over n samples of |phi(g x g^-1) - phi(x)| with x in `sub`, g in `ghat`.
DefectSample estimate_invariance_defect(const QuasimorphismFn& phi, const Subgroup& sub, const GroupModel& ghat,
                                        long n, std::uint64_t seed, int length = 20);

/// (phi(x^m) - phi(x^-m)) / (2m) with m = m_max; off the true homogenization by at most
/// D(phi)/m_max, recorded in truncation_error when D(phi) is known.
QuasimorphismFn homogenize(const QuasimorphismFn& phi, const GroupModel& g, int m_max = 64);

struct GammaBoundStep {
    std::string description;
    double slack = 0.0;  ///< measured |lhs - rhs|
    double allowed = 0.0;
    bool pass = true;
};

struct GammaBoundRow {
    long m = 0;
    double value = 0.0;  ///< phi(gamma_m)
    double bound = 0.0;  ///< 3 D + homogeneity tolerance
    bool pass = true;
    std::vector<GammaBoundStep> steps;
};

struct GammaBoundReport {
    std::vector<GammaBoundRow> rows;
    double defect_used = 0.0;
    bool pass = true;
};

/// gamma_m = [f^m, g_a][f^m, g_b^-1]^-1; checks |phi(gamma_m)| <= 3D for m = 1..m_max and
/// replays the estimate step by step. `homogeneity_tol` absorbs truncation error of phi.
/// Throws std::invalid_argument if f^m or g_a g_b leaves `sub`, or phi is not homogeneous.
GammaBoundReport check_gamma_bound(const QuasimorphismFn& phi, const GroupModel& g, const Subgroup& sub, const Element& f,
                          const Element& g_a, const Element& g_b, long m_max, double defect,
                          double homogeneity_tol = 0.0);

}  // namespace symplab
