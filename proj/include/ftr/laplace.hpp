#pragma once

#include <vector>

#include "ftr/algebra.hpp"
#include "ftr/updown.hpp"

namespace ftr {

// Givental-type data (L, R(u), T(u)) acting on a topological F-CohFT:
// L invertible on V_0, R(u) = id + sum_{m>=1} R_m u^m, T(u) = sum_{m>=2} T_m u^m.
struct GiventalData {
    int dim = 1;
    std::vector<std::vector<Rat>> L;                  // dim x dim, L[row][col]
    std::vector<std::vector<std::vector<Rat>>> Rm;    // Rm[m-1][row][col], m >= 1
    std::map<int, std::vector<Rat>> T;                // T_m in V_0, m >= 2

    static GiventalData identity(int dim) {
        GiventalData d;
        d.dim = dim;
        d.L.assign(dim, std::vector<Rat>(dim, Rat(0)));
        for (int i = 0; i < dim; ++i) d.L[i][i] = Rat(1);
        return d;
    }

    std::vector<Rat> r_coeff(int m, const std::vector<Rat>& v) const; // R_m v (R_0 = id)
    std::vector<std::vector<Rat>> rinv_series(int order) const;       // flattened rho matrices
};

// Coefficients E_{ij} of the edge weight (id - R^{-1}(u0) R(-u)) / (u0 + u),
// as matrices acting on V_0, for i + j <= order.
std::vector<std::vector<std::vector<std::vector<Rat>>>> edge_weight_coeffs(const GiventalData& g,
                                                                           int order);

// V_0-valued even Laurent forms on the Laplace side, expanded on the basis
// eps_alpha^j = e_alpha (2j+1)!! zeta^{-2j-2} dzeta with j in Z: j >= 0 spans
// Upsilon_-, j < 0 spans d Upsilon_+ (the negative double factorial follows
// the signed-reciprocal convention).
using Form = std::map<std::pair<int, int>, Rat>; // (alpha, j) -> coefficient
using PlusVec = std::map<Loop, Rat>;             // coefficients on eps_{(alpha,k)}

void form_add(Form& f, int alpha, int j, const Rat& v);

// Everything needed to evaluate the loop-space tensor formulas for
// L-hat R-hat T-hat of a topological F-CohFT, in exact truncated arithmetic.
struct LoopFrame {
    Algebra alg;
    UpDown ud;
    GiventalData data;
    int cap = 0; // series order; form exponents kept in [-(cap+2), cap]

    // theta_T = theta_0 (e-part + sum_{m>=1} S_m zeta^{2m}); S_m in V_0
    std::map<int, std::vector<Rat>> theta_tail;

    // lambda_{LR,s/t} and inverses as capped maps on V_+ coefficients
    LinMap<Rat> lam_s, lam_t, lam_s_inv, lam_t_inv;
    // U_LR as a map (alpha, j>=0) -> plus indices; Delta_LR likewise down
    LinMap<Rat> U_LR, Delta_LR;
    // mu_LR[eps^j] = [L R(-u) eps^j]_- and its inverse, on Upsilon_-
    LinMap<Rat> mu_LR, mu_LR_inv;
    // d o E_R on eps^k: entries ((alpha, -i-1-as-loop?), ...) kept as explicit table
    std::map<std::pair<int, int>, Form> dER; // (beta,k) -> form in dUpsilon_+

    enum class Frame {
        TransformOfStandard, // original up/down standard; U_LR = lambda_t o U
        TransformedStandard  // final up/down standard; U_LR = std o mu_LR
    };

    LoopFrame(Algebra a, UpDown u, GiventalData g, int cap, Frame frame);

    Form mul_T(const Form& a, const Form& b) const;
    Form d_lr(const Loop& in) const;                       // d o lambda_{LR,s}^{-1} on eps_{(beta,k)}
    Form delta_lr_dressed(const Loop& in) const;           // (id + d E_R) o Delta_LR
    PlusVec ubar(const Form& f) const;                     // U_LR on the j >= 0 part
    std::vector<std::pair<Form, PlusVec>> kappa_T(const Form& chi) const;
    Form varpi_T() const;

    std::vector<Rat> v0_mul(const std::vector<Rat>& x, const std::vector<Rat>& y) const {
        return alg.mul(x, y);
    }
};

// tau = L^{-1}[T] as a map of loop indices (entries at u-degree m >= 2).
std::map<Loop, Rat> laplace_tau(const GiventalData& g);

} // namespace ftr
