#pragma once

// Reference values computed independently with 30-digit mpmath: monomial
// series summed to 1e-25 term size, adaptive quadrature for integrals.

namespace oracle {

// z = (0.3+0.2i, 0.4-0.1i), w = (0.5-0.1i, 0.2+0.3i).
inline constexpr double egg2_off_re = 0.241447208655066330846;
inline constexpr double egg2_off_im = -0.00984759504417200428896;
inline constexpr double egg3_off_re = 0.205669553204593652668;
inline constexpr double egg3_off_im = -0.00696926949404768194677;
inline constexpr double ball_off_re = 0.367198697501799610147;
inline constexpr double ball_off_im = -0.0134394288874492375678;
// z = w = (0.6, 0.5i).
inline constexpr double egg2_diag = 1.2786470747501067117906;

// ||z1^3 z2^5||^2 on Egg(2).
inline constexpr double egg2_norm_3_5 = 0.0117495290489159031177;

inline constexpr double kappa_15_05 = 1.5707963267948966051;
inline constexpr double kappa_3_1 = 0.0833333333333333333333;
inline constexpr double kappa_1_m05 = 3.14159265358979321023;

inline constexpr double tau_2_4_sixth = 2.87524396910822614135;

// int_0^inf dx / (1 + x^4).
inline constexpr double quartic_integral = 1.11072073453959156175;
// A_2 = A_4 = 1, M = 1: 2 int_0^inf dr / (1 + r^2 + r^4).
inline constexpr double claim_mixed = 1.81379936423421785059;

// Disc: int |K(0.5, w)| dA(w).
inline constexpr double disc_I10_half = 1.15072828980712370976;

}  // namespace oracle
