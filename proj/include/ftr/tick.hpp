#pragma once

#include "ftr/cohft.hpp"

namespace ftr {

// Which side of a central-to-tick node carries the psi-power coming from the
// u-decoration. For k = 2 (loops) both powers sit on the central vertex in
// either convention.
enum class TickSide { TickVertex, Central };

// Element of the tick group restricted to fundamental-class decorations:
// for each k >= 2 a symmetric element of (V_0[u])^(x)k given by coefficients
// on sorted k-tuples of (basis label, u-power).
struct TickData {
    std::map<int, std::map<Multi, Rat>> sha;

    void add(int k, Multi slots, const Rat& v);
    bool empty() const { return sha.empty(); }

    TickData operator+(const TickData& o) const;
};

// Correlator of Sha-hat Omega for a topological base (alg, w), standard
// up/down. Each graph summand factorises as F-TFT coefficients times the
// central-vertex Witten correlator times genus-0 Witten correlators at the
// tick vertices.
Rat tick_correlator(const Algebra& alg, const TickData& tick, const CorrelatorKey& key,
                    TickSide side);

} // namespace ftr
