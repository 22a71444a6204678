#pragma once

#include "ftr/laplace.hpp"

namespace ftr {

// Local F-spectral curve: a disjoint union of formal disks with x = zeta^2/2
// and involution zeta -> -zeta, a per-sheet odd y-series, two bidifferentials
// equal to the standard double pole plus holomorphic coefficient blocks, and
// per-sheet weights entering the connected kernel.
struct LocalCurve {
    int npts = 1;
    std::vector<Rat> w;
    // odd part of y per sheet: exponent (odd, >= 1) -> coefficient
    std::vector<std::map<int, Rat>> y_odd;
    // holomorphic blocks: ((sheet1, a), (sheet2, b)) -> coefficient of
    // zeta1^a zeta2^b dzeta1 dzeta2
    std::map<std::pair<std::pair<int, int>, std::pair<int, int>>, Rat> conn_block, disc_block;
    int order = 24; // truncation order for Laurent arithmetic

    void validate() const; // dy nonzero at each ramification point
};

LocalCurve airy_curve(int order = 24);

// The local curve attached to L-hat R-hat T-hat of a topological F-CohFT
// (canonical idempotent basis required): y = -zeta + d tau / d x per sheet,
// standard conn bidifferential, disc block d(x)d E_R.
LocalCurve curve_from_lrt(const Algebra& alg, const GiventalData& data, int order);

// Meromorphic 1-form with poles at the ramification points and no residues:
// per-sheet truncated Laurent coefficients of zeta^e dzeta.
struct LaurentForm {
    std::vector<std::map<int, Rat>> sheets;

    void validate_residue_free() const;
};

enum class Star { Conn, Disc };

// Polar projector P^star: polar part relative to omega^star_{0,2}; exact
// forms map to zero.
LaurentForm polar_project(const LocalCurve& curve, Star star, const LaurentForm& form);

// Coefficient tables of the projected multidifferentials on the xi^{disc}
// bases: map (g,n) -> tensor of coefficients.
struct MultiDiffTable {
    std::map<std::pair<int, int>, MultiTensor<Rat>> omega;
};

// Run the residue recursion through (g, n); `order` bounds the Laurent
// truncation (must be at least 2(3g-2+n)+2) and an audit at order+4 confirms
// the reported coefficients are stable.
MultiDiffTable spectral_omega(const LocalCurve& curve, int g, int n, int order, bool audit = true);

// Identification of the coefficient table with F-TR amplitudes; the standard
// up/down-morphisms act as the identity on coefficients.
MultiTensor<Rat> omega_to_amplitudes(const LocalCurve& curve, const UpDown& ud,
                                     const MultiDiffTable& table, int g, int n);

} // namespace ftr
