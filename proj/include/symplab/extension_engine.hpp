#pragma once
/// @file extension_engine.hpp
/// Extension of a quasimorphism on a normal subgroup G of Ghat with abelian quotient
/// Q = Z^k or R^k: phi_hat(g) = integral over a fundamental domain B of the lattice
/// Lambda of phi(g s(x + q(g))^-1 s(x)) dnu(x), with s(lambda + b) = s1(lambda) s2(b).

#include "symplab/quasimorphism.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace symplab {

/// Structural problems: missing splitting, bad section, tiling failure, G membership failure.
class ExtensionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using QVec = Eigen::VectorXd;

struct Decomposition {
    Eigen::VectorXi lambda;  ///< coefficients in the lattice basis
    QVec b;                  ///< representative in B
    int coset = -1;          ///< index into the coset list (discrete quotients)
};

class ExtensionProblem {
public:
    enum class Kind { discrete, continuous };

    /// Q = R^k, B = { M t : t in [0,1)^k }, nu = normalized Lebesgue measure. Rounding in
    /// the R^k coordinates leaves Phi(g, x) a few ulps off G; `project` maps such an element
    /// onto G and is applied only when |q(Phi)| <= 1e-9 (1 + |x| + |q(g)|).
    static ExtensionProblem continuous(std::string name, std::shared_ptr<const GroupModel> ghat, Subgroup g,
                                       std::function<QVec(const Element&)> q, Eigen::MatrixXd lattice,
                                       std::vector<Element> s1_images, std::function<Element(const QVec&)> section_b,
                                       std::function<Element(const Element&)> project);
    /// Q = Z^k, Lambda of finite index |det M|, B = the given coset representatives, each of weight 1/index.
    static ExtensionProblem discrete(std::string name, std::shared_ptr<const GroupModel> ghat, Subgroup g,
                                     std::function<QVec(const Element&)> q, Eigen::MatrixXd lattice,
                                     std::vector<Element> s1_images, std::vector<QVec> cosets,
                                     std::vector<Element> coset_sections);

    [[nodiscard]] const std::string& name() const { return name_; }
    [[nodiscard]] Kind kind() const { return kind_; }
    [[nodiscard]] int dim() const { return static_cast<int>(lattice_.rows()); }
    [[nodiscard]] const GroupModel& ghat() const { return *ghat_; }
    [[nodiscard]] const Subgroup& subgroup() const { return g_; }
    [[nodiscard]] const Eigen::MatrixXd& lattice() const { return lattice_; }
    [[nodiscard]] const std::vector<QVec>& cosets() const { return cosets_; }
    [[nodiscard]] long index() const { return static_cast<long>(cosets_.size()); }

    [[nodiscard]] QVec q(const Element& g) const { return q_(g); }
    /// x = M lambda + b with b in B.
    [[nodiscard]] Decomposition decompose(const QVec& x) const;
    /// s1 on Lambda, extended multiplicatively from the commuting generator images.
    [[nodiscard]] Element s1(const Eigen::VectorXi& lambda) const;
    /// Section on B.
    [[nodiscard]] Element s2(const Decomposition& d) const;
    /// s(x) = s1(lambda) s2(b).
    [[nodiscard]] Element section_eval(const QVec& x) const;
    /// Phi(g, x) = g s(x + q(g))^-1 s(x); throws ExtensionError if it leaves G.
    [[nodiscard]] Element phi_map(const Element& g, const QVec& x) const;
    /// r itself if it lies in G; its projection if q(r) is rounding noise relative to
    /// `scale`; otherwise throws ExtensionError naming `what`.
    [[nodiscard]] Element snap_to_g(const Element& r, double scale, const std::string& what) const;
    /// Random point of Q (continuous: coordinates in [-range, range]; discrete: integers).
    [[nodiscard]] QVec sample_q(std::mt19937_64& rng, double range) const;
    /// Number of sampled points whose decomposition fails to reproduce x or lands outside B.
    [[nodiscard]] long tiling_failures(long n, std::uint64_t seed) const;

private:
    ExtensionProblem() = default;
    void validate_splitting() const;

    std::string name_;
    Kind kind_ = Kind::continuous;
    std::shared_ptr<const GroupModel> ghat_;
    Subgroup g_;
    std::function<QVec(const Element&)> q_;
    Eigen::MatrixXd lattice_;
    Eigen::MatrixXd lattice_inv_;
    std::vector<Element> s1_images_;
    std::function<Element(const QVec&)> section_b_;
    std::function<Element(const Element&)> project_;
    std::vector<QVec> cosets_;
    std::vector<Element> coset_sections_;
};

struct ExtensionConfig {
    enum class Method { gauss, monte_carlo };
    Method method = Method::gauss;
    /// Gauss-Legendre nodes per smooth piece and dimension (at most 20).
    int nodes = 8;
    long mc_samples = 4096;
    std::uint64_t seed = 1;
};

struct ChainStep {
    std::string description;
    double slack = 0.0;    ///< max over nodes of |lhs - rhs| (pointwise)
    double allowed = 0.0;  ///< D' , D or 2D'
};

struct DefectChain {
    std::vector<ChainStep> steps;
    /// |integral of the last line - phi_hat(g1) - phi_hat(g2)|; zero up to quadrature.
    double averaging_slack = 0.0;
    double total = 0.0;  ///< |phi_hat(g1 g2) - phi_hat(g1) - phi_hat(g2)|
};

class ExtendedQM {
public:
    ExtendedQM(QuasimorphismFn phi, std::shared_ptr<const ExtensionProblem> problem, ExtensionConfig cfg = {});

    [[nodiscard]] double operator()(const Element& g) const { return evaluate(g); }
    [[nodiscard]] double evaluate(const Element& g) const;
    /// Integral of phi(Phi(g, x + a)) over B; equals evaluate(g) for every a in Q.
    [[nodiscard]] double evaluate_shifted(const Element& g, const QVec& a) const;
    /// Pointwise replay of the defect estimate for the pair (g1, g2).
    [[nodiscard]] DefectChain defect_chain(const Element& g1, const Element& g2, double d, double d_prime) const;
    /// The extension as a quasimorphism on Ghat.
    [[nodiscard]] QuasimorphismFn as_quasimorphism(std::optional<double> defect_bound = std::nullopt) const;

    [[nodiscard]] const ExtensionProblem& problem() const { return *problem_; }
    [[nodiscard]] std::shared_ptr<const ExtensionProblem> problem_ptr() const { return problem_; }
    [[nodiscard]] const QuasimorphismFn& base() const { return phi_; }

private:
    /// Weighted average of f over B with breakpoints where any decomposition of x + o,
    /// o in offsets, jumps.
    double integrate(const std::function<double(const QVec&)>& f, const std::vector<QVec>& offsets) const;

    QuasimorphismFn phi_;
    std::shared_ptr<const ExtensionProblem> problem_;
    ExtensionConfig cfg_;
};

/// Homogenization (truncated at m_max) of the extension.
QuasimorphismFn homogenize_extension(const ExtendedQM& ext, int m_max = 64);

/// F_2 x R with G = F_2, Lambda = Z generated by 1, s1(n) = (w^n, n), s2(b) = (e, b).
std::shared_ptr<const ExtensionProblem> free_times_real_problem(const FreeWord& w = {});
/// F_2 x Z with G = F_2 and Lambda = Q = Z, B = {0}.
std::shared_ptr<const ExtensionProblem> free_times_integer_problem();
/// F_2 semidirect Z^2 (first factor acting by the swap a <-> b) with G = F_2, Q = Z^2 and
/// the index-k sublattice Lambda_1 = <(1,0), (0,k)>, s1(1,0) = (ab, (1,0)), s1(0,k) = (e, (0,k)).
/// Coset representatives (0, j), j < k, with sections (a^j b^(j mod 2), (0, j)).
std::shared_ptr<const ExtensionProblem> virtual_split_problem(int k);
/// Heisenberg group over its center with Q = Z^2 and lattice diag(p1, p2); always refused.
std::shared_ptr<const ExtensionProblem> heisenberg_problem(int p1 = 1, int p2 = 1);

}  // namespace symplab
