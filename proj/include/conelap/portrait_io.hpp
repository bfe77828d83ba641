#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "conelap/ode_engine.hpp"

namespace conelap {

// Header "traj_id,t,x,y", one row per sample, %.17g numbers, LF endings.
// traj_id is the seed index; failed seeds contribute no rows.
void write_csv(std::ostream& out, const PortraitRun& run);
void write_csv(std::ostream& out, const std::vector<Trajectory>& trajs);

// Polylines in a fixed 640x480 viewBox over the given plot window, with axes.
void write_svg(std::ostream& out, const PortraitRun& run, std::pair<double, double> x_range,
               std::pair<double, double> y_range);

// File variants. I/O failures raise InvalidInput naming the path.
void write_csv_file(const std::string& path, const PortraitRun& run);
void write_svg_file(const std::string& path, const PortraitRun& run, std::pair<double, double> x_range,
                    std::pair<double, double> y_range);

}  // namespace conelap
