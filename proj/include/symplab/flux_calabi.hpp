#pragma once
/// @file flux_calabi.hpp
/// Flux of generator words by line quadrature against alpha/beta, Calabi
/// values of Hamiltonian words, and the mu_P oracle on words that reduce to
/// products of conjugated annulus-supported Hamiltonian flows.

#include "symplab/maps.hpp"
#include "symplab/quadrature.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace symplab {

struct FluxResult {
    CohomologyClass cls;
    /// Pairings <Flux, [alpha_j]>, <Flux, [beta_j]> in the order (a_1, b_1, ..., a_l, b_l).
    std::vector<double> raw;
    double error_estimate = 0.0;
};

/// Line quadrature of i_X omega = X_x dy - X_y dx along alpha and beta of the generator's chart.
FluxResult flux_of_generator(const Generator& g, int genus, const QuadratureConfig& cfg = {});
/// Closed-form values: b[beta]*, a[alpha]*, c[alpha]*, d[beta]* (times the generator time), 0 for h, h'.
CohomologyClass symbolic_flux_of_generator(const Generator& g, int genus);

/// Sum over letters of exponent * flux of the generator.
FluxResult flux_of_word(const Word& w, int genus, const QuadratureConfig& cfg = {});
CohomologyClass symbolic_flux_of_word(const Word& w, int genus);

/// T * flux_of_generator(g).
FluxResult flux_of_flow_time(const Generator& g, const Number& T, int genus, const QuadratureConfig& cfg = {});

/// Refusal of calabi_of_word: a factor without Hamiltonian data, a factor outside the
/// region, or nonzero flux.
class NotHamiltonianInRegion : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Refusal of mu_p_oracle.
class NotOracleReducible : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CalabiTerm {
    Generator gen;
    long exponent = 1;
    /// exponent * time * amplitude.
    double flow_time = 0.0;
    /// Integral of the driving Hamiltonian over P_eps.
    double integral = 0.0;
    double contribution = 0.0;
    std::optional<Number> exact_contribution;
};

struct CalabiValue {
    double value = 0.0;
    std::optional<Number> exact;
    std::vector<CalabiTerm> terms;
    double error_estimate = 0.0;
};

/// Integral of H_{q,r} (or H'_{q,r}) over P_eps, cached per parameter set.
QuadratureResult hamiltonian_integral(double q, double r, bool primed, const Epsilon& eps,
                                      const QuadratureConfig& cfg = {});

/// Calabi invariant of a word of h/h' letters supported in one chart.
CalabiValue calabi_of_word(const Word& w, int chart, const SurfaceModel& model, const QuadratureConfig& cfg = {});

/// One conjugated Hamiltonian factor N h^x N^-1 found by the oracle.
struct OracleFactor {
    int chart = 0;
    bool primed = false;  ///< h' (horizontal family) rather than h
    Number amount;        ///< x in h^x
    std::string conjugator;
    Number exact_calabi;  ///< x * b * (-q) (or x * a * (-q'))
    double numeric_calabi = 0.0;
};

struct MuPResult {
    /// Sum of factor Calabi values; exact when the quadruples are rational.
    Number value;
    double numeric = 0.0;
    /// The true mu_P value lies within defect_multiple * D(mu_P) of value.
    int defect_multiple = 0;
    std::vector<OracleFactor> factors;
    double quadrature_error = 0.0;
};

/// Rewrites w with the exact relations among sigma, tau, sigma', tau' into a product
/// of conjugated Hamiltonian shears and evaluates them by the Calabi property.
/// Throws NotOracleReducible outside that class.
MuPResult mu_p_oracle(const Word& w, const SurfaceModel& model, const QuadratureConfig& cfg = {});

/// A pair of words expected to commute, with the reason it should.
struct CommutingPair {
    std::string label;
    Word f;
    Word g;
};

/// Pairs with disjoint chart supports, pairs of powers of one flow, and the sigma/tau'
/// and sigma'/tau pairs, built from quads[0] on chart 1 and quads[1] on chart 2.
/// Requires genus >= 2 and two quadruples.
std::vector<CommutingPair> commuting_pair_library(const SurfaceModel& model, const std::vector<Quadruple>& quads);

}  // namespace symplab
