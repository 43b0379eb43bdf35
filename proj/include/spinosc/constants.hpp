// Physical constants (SI) used by the magnetic coupling calculator.
#pragma once

namespace spinosc::constants {

inline constexpr double pi = 3.14159265358979323846;

inline constexpr double hbar = 1.054571817e-34;      // J s
inline constexpr double mu_0 = 1.25663706212e-6;     // T m / A
inline constexpr double mu_bohr = 9.2740100783e-24;  // J / T

// Cesium-133 ground state
inline constexpr double cs_g_j = 2.00254032;
inline constexpr double cs_g_i = -0.00039885395;
inline constexpr double cs_nuclear_spin = 3.5;

// First-order Zeeman rate (g_J - g_I) mu_B / ((2I+1) hbar), rad/(s T), for |m_F| = 1
inline constexpr double cs_linear_zeeman_rate =
    (cs_g_j - cs_g_i) * mu_bohr / ((2.0 * cs_nuclear_spin + 1.0) * hbar);

// m_F = 0 clock-state quadratic shift, rad/(s T^2), from 268.575 rad/(ns T^2)
inline constexpr double cs_clock_shift = 268.575e9;

}  // namespace spinosc::constants
