#include "conelap/portrait_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "conelap/errors.hpp"

namespace conelap {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMargin = 40.0;

void csv_rows(std::ostream& out, std::size_t id, const Trajectory& traj) {
  char buf[128];
  for (const auto& s : traj.samples) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", id, s.t, s.x, s.y);
    out << buf;
  }
}

std::string fixed3(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

template <class Fn>
void write_file(const std::string& path, Fn&& fn) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidInput("cannot open '" + path + "' for writing");
  fn(out);
  out.flush();
  if (!out) throw InvalidInput("write to '" + path + "' failed");
}

}  // namespace

void write_csv(std::ostream& out, const PortraitRun& run) {
  out << "traj_id,t,x,y\n";
  for (const auto& seed : run.seeds) {
    if (seed.trajectory) csv_rows(out, seed.index, *seed.trajectory);
  }
}

void write_csv(std::ostream& out, const std::vector<Trajectory>& trajs) {
  out << "traj_id,t,x,y\n";
  for (std::size_t k = 0; k < trajs.size(); ++k) csv_rows(out, k, trajs[k]);
}

void write_svg(std::ostream& out, const PortraitRun& run, std::pair<double, double> x_range,
               std::pair<double, double> y_range) {
  if (!(x_range.second > x_range.first) || !(y_range.second > y_range.first)) {
    throw InvalidInput("SVG plot window must have positive width and height");
  }
  const double pw = kWidth - 2 * kMargin;
  const double ph = kHeight - 2 * kMargin;
  const auto px = [&](double x) { return kMargin + (x - x_range.first) / (x_range.second - x_range.first) * pw; };
  const auto py = [&](double y) {
    return kHeight - kMargin - (y - y_range.first) / (y_range.second - y_range.first) * ph;
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 640 480\" width=\"640\" height=\"480\">\n";
  out << "<defs><clipPath id=\"plot\"><rect x=\"" << fixed3(kMargin) << "\" y=\"" << fixed3(kMargin)
      << "\" width=\"" << fixed3(pw) << "\" height=\"" << fixed3(ph) << "\"/></clipPath></defs>\n";
  out << "<rect x=\"0\" y=\"0\" width=\"640\" height=\"480\" fill=\"white\"/>\n";

  // Axes through the origin when it is in view, otherwise along the window edge.
  const double ax = (x_range.first <= 0.0 && 0.0 <= x_range.second) ? px(0.0) : kMargin;
  const double ay = (y_range.first <= 0.0 && 0.0 <= y_range.second) ? py(0.0) : kHeight - kMargin;
  out << "<g stroke=\"black\" stroke-width=\"1\">\n";
  out << "<line x1=\"" << fixed3(kMargin) << "\" y1=\"" << fixed3(ay) << "\" x2=\"" << fixed3(kWidth - kMargin)
      << "\" y2=\"" << fixed3(ay) << "\"/>\n";
  out << "<line x1=\"" << fixed3(ax) << "\" y1=\"" << fixed3(kMargin) << "\" x2=\"" << fixed3(ax)
      << "\" y2=\"" << fixed3(kHeight - kMargin) << "\"/>\n";
  out << "</g>\n";
  out << "<text x=\"" << fixed3(kWidth - kMargin + 6) << "\" y=\"" << fixed3(ay + 4)
      << "\" font-size=\"12\">x</text>\n";
  out << "<text x=\"" << fixed3(ax - 4) << "\" y=\"" << fixed3(kMargin - 8) << "\" font-size=\"12\">y</text>\n";

  out << "<g clip-path=\"url(#plot)\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"1\">\n";
  for (const auto& seed : run.seeds) {
    if (!seed.trajectory || seed.trajectory->samples.empty()) continue;
    out << "<polyline id=\"t" << seed.index << "\" points=\"";
    bool first = true;
    for (const auto& s : seed.trajectory->samples) {
      if (!first) out << ' ';
      first = false;
      // Clamp far-away points so huge coordinates do not bloat the file.
      const double sx = std::clamp(px(s.x), -kWidth, 2 * kWidth);
      const double sy = std::clamp(py(s.y), -kHeight, 2 * kHeight);
      out << fixed3(sx) << ',' << fixed3(sy);
    }
    out << "\"/>\n";
  }
  out << "</g>\n</svg>\n";
}

void write_csv_file(const std::string& path, const PortraitRun& run) {
  write_file(path, [&](std::ostream& out) { write_csv(out, run); });
}

void write_svg_file(const std::string& path, const PortraitRun& run, std::pair<double, double> x_range,
                    std::pair<double, double> y_range) {
  write_file(path, [&](std::ostream& out) { write_svg(out, run, x_range, y_range); });
}

}  // namespace conelap
