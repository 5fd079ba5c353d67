#pragma once

/**
 * @file params.hpp
 * @brief Default vehicle, inertia construction, validation and the
 *        key/value parameter file.
 */

#include "glider/model/types.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace glider {

/// Lamb's added-mass factors of a prolate spheroid.
struct SpheroidAddedMass {
  double k1;      // axial translation
  double k2;      // transverse translation
  double k_rot;   // transverse rotation
};
SpheroidAddedMass spheroid_added_mass_factors(double length, double diameter);

/**
 * Diagonal generalized inertia of a prolate-spheroid hull of the given mass:
 * uniform solid spheroid for the rigid part plus Lamb's added mass of the
 * displaced fluid.
 */
Mat6<double> spheroid_inertia(double mass, double length, double diameter,
                              double fluid_density = 1000.0);

/// Hydrodynamic coefficients of the reference vehicle.
HydroCoefficients<double> default_hydro_coefficients();

/**
 * Reference vehicle: 1.2 m, 13 kg hull. The rotational block of M comes from
 * spheroid_inertia (plus a small wing contribution in roll); the translational
 * block is m_total·I, which is the form the depth-channel linearization
 * assumes.
 */
VehicleParams<double> default_vehicle_params();

/// Every invariant violation found; empty when the parameters are usable.
std::vector<std::string> validate(const VehicleParams<double>& params);

/**
 * Parameter file: one `key = value` per line, `#` starts a comment, vectors
 * are whitespace separated. Keys not present keep their default. See
 * write_vehicle_params for the full key list with units.
 */
VehicleParams<double> parse_vehicle_params(std::istream& in, const std::string& source = "<stream>");
VehicleParams<double> load_vehicle_params(const std::string& path);
void write_vehicle_params(std::ostream& out, const VehicleParams<double>& params);

}  // namespace glider
