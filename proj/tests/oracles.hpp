#ifndef BCX_TESTS_ORACLES_HPP
#define BCX_TESTS_ORACLES_HPP

// Independent brute-force reference implementations used to cross-check the
// library. These deliberately avoid the library's own face/filtration
// machinery: membership goes through the raw N-span search only.

#include <set>
#include <vector>

#include "bcx/lattice_monoid.hpp"

namespace bcx_tests {

using bcx::Int;
using bcx::IVec;
using bcx::WeaklyToricMonoid;

// --- shared fixtures ---
bcx::MonoidPresentation pres_nn(std::size_t k);              // N^k
bcx::MonoidPresentation pres_z_units(std::size_t k, std::size_t u); // N^k x Z^u
bcx::MonoidPresentation pres_ex_square();  // generators (1,0),(1,2),(1,1), p1+p2=2p3
bcx::MonoidPresentation pres_ex_cross();   // generators of the q1+q2=q3+q4 cone in Z^3
bcx::MonoidPresentation pres_numsg_23();   // <2,3> in N, not saturated
bcx::MonoidPresentation pres_group_z();    // Z presented by 1, -1

// Exhaustive face oracle: every subset of generators is tested for the
// bounded summand-extraction property; canonical key is the set of
// generators absorbed by the subset's N-span. Returns the set of keys.
std::set<std::vector<std::size_t>> oracle_faces(const bcx::MonoidPresentation& pres,
                                                unsigned degree_bound);

// Brute-force filtration layers: max-parts decomposition count over all
// candidate parts, pure N-span search; requires generators with nonnegative
// coordinates. layers[n] = elements of level exactly n (n <= n_max).
std::vector<std::set<IVec>> oracle_layers(const bcx::MonoidPresentation& pres,
                                          unsigned n_max);

} // namespace bcx_tests

#endif
