#pragma once

#include <optional>

#include "ftr/laplace.hpp"
#include "ftr/witten.hpp"

namespace ftr {

// Address of one F-CohFT intersection number: genus, output (basis label,
// psi_0 power in the standard frame), multiset of inputs (label, psi power).
struct CorrelatorKey {
    int g = 0;
    Loop out;
    Multi ins;

    auto operator<=>(const CorrelatorKey&) const = default;
};

// Amplitude of the topological F-CohFT attached to (alg, w): the
// U-contraction of the F-TFT coefficient times a Witten correlator.
Rat topological_correlator(const Algebra& alg, const UpDown& ud, const CorrelatorKey& key);

// Loop-space F-Airy seed of a topological F-CohFT (the closed coordinate
// formulas; an independent code path from the LRT pipeline below).
Seed loop_seed_topological(const Algebra& alg, const UpDown& ud, int cap);

// Loop-space seed of L-hat R-hat T-hat of a topological F-CohFT, assembled
// through theta_T, the edge operator E_R, and the lambda_{LR} change of
// bases. `frame` picks which up/down-morphisms are the standard ones.
Seed loop_seed_lrt(const Algebra& alg, const GiventalData& data, const UpDown& ud, int cap,
                   LoopFrame::Frame frame = LoopFrame::Frame::TransformedStandard);

// Correlator of the transformed F-CohFT in the transformed up/down frame:
// the F-TR amplitude of loop_seed_lrt at the key.
Rat lrt_correlator(const Algebra& alg, const GiventalData& data, const UpDown& ud,
                   const CorrelatorKey& key, int cap,
                   LoopFrame::Frame frame = LoopFrame::Frame::TransformedStandard);

// Amplitude tensors of T-hat of the topological F-CohFT: base correlators
// with extra T(psi) insertions, 1/m!-weighted.
MultiTensor<Rat> translated_tensor(const Algebra& alg, const UpDown& ud,
                                   const std::map<int, std::vector<Rat>>& T, int g, int n, int cap);
Rat translated_correlator(const Algebra& alg, const UpDown& ud,
                          const std::map<int, std::vector<Rat>>& T, const CorrelatorKey& key,
                          int cap);

// Amplitudes of L-hat R-hat T-hat by the Givental stable-tree route:
// lambda_{LR,t} o (sum over stable trees with B_R edge weights over the
// translated table) o (lambda_{LR,s}^{-1})^(x)n.
MultiTensor<Rat> rt_treesum_tensor(const Algebra& alg, const GiventalData& data, const UpDown& ud,
                                   int g, int n, int cap);
Rat rt_correlator_treesum(const Algebra& alg, const GiventalData& data, const UpDown& ud,
                          const CorrelatorKey& key, int cap);

// Class-level oracle: the same correlator evaluated straight from the
// definition of the R-hat action (boundary strata over stable trees, edge
// weights E(psi',psi''), leaf dressings R^{-1}(psi), root dressing R(-psi_0)),
// with every moduli integral reduced to Witten correlators. Standard up/down.
Rat rt_correlator_classlevel(const Algebra& alg, const GiventalData& data,
                             const CorrelatorKey& key);

// T-hat'_R R-hat = R-hat T-hat''_R on a unital base (flat unit e):
// T'_R(u) = u (R(u) - id) e and T''_R(u) = u (id - R^{-1}(u)) e.
struct RtUnitReport {
    bool ok = true;
    std::optional<CorrelatorKey> first_failure;
};
RtUnitReport check_rt_unit(const Algebra& alg, const GiventalData& r_only, const UpDown& ud,
                           const std::vector<CorrelatorKey>& keys, int cap);

// in-tensor dressing helpers shared with tests
MultiTensor<Rat> dress_tensor(const MultiTensor<Rat>& T, const LinMap<Rat>& out_map,
                              const LinMap<Rat>& in_map);

} // namespace ftr
