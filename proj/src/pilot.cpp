#include "gfdet/pilot.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gfdet::pilot {

bool is_prime(int n) {
    if (n < 2) return false;
    if (n < 4) return true;
    if (n % 2 == 0) return false;
    for (int d = 3; static_cast<long long>(d) * d <= n; d += 2) {
        if (n % d == 0) return false;
    }
    return true;
}

void PilotSpec::validate() const {
    if (!is_prime(length_L)) {
        throw std::invalid_argument("PilotSpec: length_L must be prime, got " +
                                    std::to_string(length_L));
    }
    if (root_r < 1 || root_r > length_L - 1) {
        throw std::invalid_argument("PilotSpec: root_r must be in [1, L-1]");
    }
    if (shift_s < 0 || shift_s > length_L - 1) {
        throw std::invalid_argument("PilotSpec: shift_s must be in [0, L-1]");
    }
}

CVec generate_zc(const PilotSpec& spec) {
    spec.validate();
    const int L = spec.length_L;
    CVec base(L);
    for (int l = 0; l < L; ++l) {
        // Reduce r*l*(l+1) mod 2L first so the phase argument stays in
        // (-2*pi, 0] regardless of L; exp(-i*pi*k/L) has period 2L in k.
        const long long ll = static_cast<long long>(l) * (l + 1) % (2LL * L);
        const long long k = spec.root_r * ll % (2LL * L);
        base[l] = std::polar(1.0, -std::numbers::pi * static_cast<double>(k) / L);
    }
    if (spec.shift_s == 0) return base;
    CVec out(L);
    for (int l = 0; l < L; ++l) out[l] = base[(l + spec.shift_s) % L];
    return out;
}

PilotAssignment assign_pilots(int K, int L) {
    if (K < 1) throw std::invalid_argument("assign_pilots: K must be >= 1");
    if (!is_prime(L)) {
        throw std::invalid_argument("assign_pilots: L must be prime, got " + std::to_string(L));
    }
    const long long pool = static_cast<long long>(L) * L - L;
    if (K > pool) {
        throw std::invalid_argument("assign_pilots: K exceeds L^2-L = " + std::to_string(pool));
    }
    const int roots_used = (K + L - 1) / L;  // ceil(K/L), minimizes used roots
    PilotAssignment out;
    out.user_count_K = K;
    out.pilots.reserve(K);
    for (int j = 1; j <= K; ++j) {
        PilotSpec spec;
        spec.length_L = L;
        spec.root_r = 1 + (j - 1) % roots_used;
        spec.shift_s = (j - 1) / roots_used;  // 0-based shift index
        out.pilots.push_back(spec);
        out.root_group_sizes[spec.root_r] += 1;
    }
    return out;
}

std::complex<double> cross_correlation(const CVec& a, const CVec& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("cross_correlation: length mismatch (" +
                                    std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()) + ")");
    }
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t l = 0; l < a.size(); ++l) acc += std::conj(a[l]) * b[l];
    return acc;
}

}  // namespace gfdet::pilot
