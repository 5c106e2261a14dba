#pragma once

// The formal correction engine: jet-ideal filtration on the coefficient
// ring, the stratum dbar complex with a constructive Poincare solver, and
// the order-by-order holomorphic-coordinate correction algorithm.

#include "bcx/complex_structure.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace bcx {

// f lies in the jet ideal I^N exactly when every monomial's mu-key sits in
// the level-N filtration piece of Q; order = the largest such N (infinite,
// i.e. nullopt, only for f = 0).
struct JetIdealOrder {
    CoeffElement element;
    std::optional<unsigned> order;
};

JetIdealOrder ideal_order(const CoeffElement& f);

// The exact-level-`level` part of f split by mu-key: for each q of that
// filtration level appearing in f, the returned element collects the
// matching terms with the mu-key cleared (Fourier and z keys untouched).
std::map<std::vector<std::int64_t>, CoeffElement>
layer_decomposition(const CoeffElement& f, unsigned level);

// Verifies the freeness of the level-`level` graded piece on concrete data:
// the layer decomposition of sum_i mu_{q_i} f_i recovers exactly the nonzero
// restrictions f_i|_V. The q_i must be distinct elements of that layer.
bool layer_independence_check(
    const Chart& chart,
    const std::vector<std::pair<std::vector<std::int64_t>, CoeffElement>>& terms,
    unsigned level);

// An antiholomorphic form on the vertex stratum V: coefficients are
// functions on V (mu-key 0) indexed by strictly increasing tuples of
// (0-based) antiholomorphic basis directions.
struct StratumForm {
    Chart chart;
    unsigned degree = 0;
    std::map<std::vector<std::size_t>, CoeffElement> components;

    explicit StratumForm(Chart c, unsigned r = 0)
        : chart(std::move(c)), degree(r)
    {
    }
    static StratumForm function(const Chart& c, const CoeffElement& f);

    CoeffElement component(const std::vector<std::size_t>& idx) const;
    // Adds f to the component at idx (validates tuple shape and mu-key 0).
    void insert(const std::vector<std::size_t>& idx, const CoeffElement& f);
    bool is_zero() const;
    bool operator==(const StratumForm& o) const;
};

// The stratum dbar operator: D_a = (1/2) d/dtheta_a on Fourier indices for
// a < k, the Wirtinger derivative d/dzbar_{a-k} for a >= k, wedged into the
// antiholomorphic basis with the usual sign.
StratumForm dbar_Sk(const StratumForm& alpha);

// Solves dbar_Sk(alpha) = beta for beta of the stated degree >= 1; exact
// blockwise linear algebra over Gaussian rationals.  Free variables are
// fixed to zero (so for degree 1 the answer has zero holomorphic-polynomial
// part); constant_shift is added to a degree-0 result (gauge freedom).
// Raises NotClosed if dbar_Sk(beta) != 0, NotExact if a block system is
// inconsistent.
StratumForm poincare_solve(const StratumForm& beta, unsigned degree,
                           const GRat& constant_shift = GRat(0));

// Drop all terms of filtration level >= n_target.
CoeffElement truncate_order(const CoeffElement& f, unsigned n_target);

// exp(f) truncated mod I^{n_target}; f must lie in I^1 so the series
// terminates modulo the ideal.
CoeffElement exp_trunc(const CoeffElement& f, unsigned n_target);

// Uncorrected chart data: the Q-direction dual forms omega_a^* and
// dtheta_a^*, and the free coordinates z_j^*.
struct SeedChart {
    Chart chart;
    std::vector<BCovector> omega_star;   // k entries
    std::vector<BCovector> dtheta_star;  // k entries
    std::vector<CoeffElement> z_star;    // n-k entries
};

SeedChart standard_seed(const Chart& chart);

// Layer corrections: g keyed by (Q-direction a < k, mu-key q), h keyed by
// (free direction j < n-k, mu-key q); all values are functions on V.
struct CorrectionFamily {
    std::map<std::pair<std::size_t, std::vector<std::int64_t>>, CoeffElement> g;
    std::map<std::pair<std::size_t, std::vector<std::int64_t>>, CoeffElement> h;
    unsigned order_reached = 0;
};

struct CorrectedChart {
    Chart chart;
    unsigned truncation_order = 0;
    std::vector<GRat> gauge;     // k unit constants multiplying e^{i theta_a}
    std::vector<CoeffElement> G; // k log-corrections (all in I^1)
    std::vector<CoeffElement> z; // n-k corrected coordinates
    // corrected monomials for all q of level 1..truncation_order-1
    std::map<std::vector<std::int64_t>, CoeffElement> mu;

    // gauge^q * mu_q e^{i theta_q} * exp_trunc(<q, G>), any q in Q.
    CoeffElement corrected_monomial(const std::vector<std::int64_t>& q) const;
};

// The order-by-order correction loop.  gauge (optional, k unit constants)
// realizes the additive-constant freedom of the angle functions.  Raises
// PreconditionResidual if the seed residuals are not in I^1 (or a layer
// fails the antiholomorphic consistency), NotIntegrable when a layer
// residual is not dbar_Sk-closed (certifying a nonzero Nijenhuis tensor).
std::pair<CorrectionFamily, CorrectedChart>
correct_to_order(const BACS& J, const SeedChart& seed, unsigned n_target,
                 const std::vector<GRat>& gauge = {});

// ----- fixture builders -----

// One term c * mu_q e^{i<m,theta>} of a substitution; the builders require
// q != 0 (correction in I^1) and m != q (no holomorphic part).
struct SubstitutionTerm {
    std::vector<std::int64_t> q;
    std::vector<std::int64_t> m;
    GRat c;
};

CoeffElement substitution_element(const Chart& chart,
                                  const std::vector<SubstitutionTerm>& terms);

// The integrable structure obtained by transporting the standard one along
// the coordinate change z_j -> z_j + s_j(mu, theta), subs[j] listing the
// terms of s_j.  The corrected coordinates of this structure are exactly
// z_j - s_j, so correct_to_order recovers h_j = -s_j.
BACS pullback_structure(const Chart& chart,
                        const std::vector<std::vector<SubstitutionTerm>>& subs,
                        std::uint64_t seed = 1);

// The non-integrable twist: J F_{i0} = F_{n+i0} + eps F_{i1} with
// eps = c(mu_{q0} e^{i<m0,theta>} + mu_{q0} e^{-i<m0,theta>}).
BACS twisted_structure(const Chart& chart, std::size_t i0, std::size_t i1,
                       const std::vector<std::int64_t>& q0,
                       const std::vector<std::int64_t>& m0, const GRat& c,
                       std::uint64_t seed = 1);

} // namespace bcx
