#pragma once

// Gaussian-CGS throughout the core: lengths in cm, angular frequencies and
// conductivities in s^-1, temperatures in K, energies in erg. Unit suffixes
// (um etc.) are converted at the CLI boundary and never reach this layer.

namespace temode {

inline constexpr double hbar = 1.054571e-27;         // erg s
inline constexpr double c_light = 2.997925e10;       // cm/s
inline constexpr double k_boltzmann = 1.380649e-16;  // erg/K

struct PlateGeometry {
  double separation_a = 1e-4;      // cm
  double temperature_T = 300.0;    // K
  double film_thickness_d = 1e-4;  // cm, used by validity diagnostics only
};

// kT/hbar; the thermal suppression of the spectrum sets in near this frequency.
inline constexpr double thermal_frequency(double T) {
  return k_boltzmann * T / hbar;
}

}  // namespace temode
