// Zadoff-Chu pilot generation, user assignment, and correlations.
#pragma once

#include <complex>
#include <map>
#include <vector>

namespace gfdet::pilot {

using CVec = std::vector<std::complex<double>>;

bool is_prime(int n);

struct PilotSpec {
    int length_L = 0;  // prime sequence length
    int root_r = 0;    // in [1, L-1]
    int shift_s = 0;   // in [0, L-1]
    void validate() const;
};

// Unshifted entry l is exp(-i*pi*r*l*(l+1)/L); output entry l is the input
// entry at (l + s) mod L. All entries have unit magnitude.
CVec generate_zc(const PilotSpec& spec);

struct PilotAssignment {
    int user_count_K = 0;
    std::vector<PilotSpec> pilots;         // index j-1 holds user j's pilot
    std::map<int, int> root_group_sizes;   // root -> K_r
    int root_count() const { return static_cast<int>(root_group_sizes.size()); }
};

// Roots cycle 1..ceil(K/L) across users; shift indices grow every full cycle.
// Requires K <= L^2 - L (the available pool).
PilotAssignment assign_pilots(int K, int L);

// Inner product sum_l conj(a_l) * b_l. Lengths must match.
std::complex<double> cross_correlation(const CVec& a, const CVec& b);

}  // namespace gfdet::pilot
