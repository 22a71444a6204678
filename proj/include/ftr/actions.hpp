#pragma once

#include <functional>
#include <optional>

#include "ftr/engine.hpp"
#include "ftr/trees.hpp"

namespace ftr {

// Independent source and target changes of bases on the loop space.
struct BasisPair {
    LinMap<Rat> source, target;
};

// ^lambda(A,B,Cconn,Cdisc,D) of the change-of-bases action.
Seed act_change_basis(const Seed& seed, const BasisPair& pair);

// Bogoliubov transformation by beta in End(V): only B and Cdisc move.
Seed act_bogoliubov(const Seed& seed, const LinMap<Rat>& beta);

// Stable-tree sum for the transformed amplitudes, an oracle independent of
// the seed-level action. `table` serves F_{g,1+n} of the base structure.
MultiTensor<Rat> bogoliubov_tree_sum(const std::function<const MultiTensor<Rat>&(int, int)>& table,
                                     const LinMap<Rat>& beta, int g, int n);

// Fixed-point check: expands ^beta Phi(x) and Phi(x + hbar beta ^beta Phi(x))
// through (g <= genus_cap, n <= n_cap) and reports the first discrepancy.
struct FixedPointReport {
    bool ok = true;
    std::optional<std::pair<int, int>> first_mismatch;
};
FixedPointReport check_fixed_point(const Seed& seed, const LinMap<Rat>& beta, int genus_cap,
                                   int n_cap);

// Same check against an explicitly supplied candidate for ^beta Phi (used to
// exercise the negative control: a perturbed potential must be flagged).
FixedPointReport check_fixed_point_potential(
    const Seed& base, const std::map<std::pair<int, int>, MultiTensor<Rat>>& phi_transformed,
    const LinMap<Rat>& beta, int genus_cap, int n_cap);

// Formal translation family: homogeneous components of the translated
// tensors in the dual variables e^i, through total degree `degree_cap`,
// together with the auxiliary tensors G (degree >= 2) and H (degree >= 1).
struct TranslationFamily {
    int degree_cap = 0;
    FamilySeed family;
    std::map<Loop, TruncPoly> G;
    std::map<std::pair<Loop, Loop>, TruncPoly> H;
};

TranslationFamily translate_family(const Seed& seed, int degree_cap);

// Evaluated translation at tau (strictly positive loop degrees, graded seed):
// the translated seed plus the evaluated ^tau G, ^tau H.
struct EvaluatedTranslation {
    Seed seed;
    std::map<Loop, Rat> G;
    LinMap<Rat> H;
};

EvaluatedTranslation act_translation_eval(const Seed& seed, const std::map<Loop, Rat>& tau,
                                          int degree_cap);

// Definitional oracle for translated amplitudes:
//   sum_m 1/m! F_{g,1+n+m}(id^n (x) tau^m).
MultiTensor<Rat> translated_amplitude_oracle(Amplitudes<Rat>& amps, const std::map<Loop, Rat>& tau,
                                             int g, int n, int m_max);

} // namespace ftr
