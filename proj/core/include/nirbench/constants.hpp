#pragma once

namespace nirbench::constants {

// CODATA values.
inline constexpr double kElectronCharge = 1.602176634e-19;  // C
inline constexpr double kBoltzmann = 1.380649e-23;          // J/K

inline constexpr double kSpeedOfLightVacuum = 299.792458;   // mm/ns
inline constexpr double kTissueRefractiveIndex = 1.4;
// Speed of light in tissue, mm/ns.
inline constexpr double kSpeedOfLightTissue = kSpeedOfLightVacuum / kTissueRefractiveIndex;

inline constexpr double kCelsiusToKelvin = 273.15;

}  // namespace nirbench::constants
