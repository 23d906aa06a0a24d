#pragma once

#include <iosfwd>
#include <string>

#include "wavinv/array2d.hpp"
#include "wavinv/darcy/observation.hpp"

namespace wavinv::io {

// Field CSV: one header line
//   # field rows=R cols=C sampling=nodal|periodic x0=.. x1=.. y0=.. y1=..
// then R comma-separated rows (row index along y). Values use the shortest
// round-trip decimal form, so a read/write cycle is exact.
void write_field_csv(std::ostream& out, const GridField2D& f);
GridField2D read_field_csv(std::istream& in);
void write_field_csv(const std::string& path, const GridField2D& f);
GridField2D read_field_csv(const std::string& path);

// Observation CSV: header
//   # observation grid=n noise_fraction=.. noise_sigma=.. seed=..
// then n rows of n readings (sensor row index along y).
void write_observation_csv(std::ostream& out, const darcy::SensorObservation& obs);
darcy::SensorObservation read_observation_csv(std::istream& in);
void write_observation_csv(const std::string& path, const darcy::SensorObservation& obs);
darcy::SensorObservation read_observation_csv(const std::string& path);

}  // namespace wavinv::io
