#include "teamsim/artifacts.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

namespace teamsim {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string time_stamp(double t) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%08.3f", t);
  return buf;
}

void write_trajectory_csv(const std::filesystem::path& path,
                          const Trajectory& traj,
                          const std::vector<std::string>& metric_names) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string());
  }
  int n = traj.samples.empty() ? 0 : static_cast<int>(traj.samples[0].w.size());
  out << "t";
  for (const auto& name : metric_names) out << "," << name;
  for (int i = 0; i < n; ++i) out << ",w" << i;
  out << "\r\n";
  for (const Sample& s : traj.samples) {
    out << format_g17(s.t);
    for (const auto& name : metric_names) {
      auto it = s.metrics.find(name);
      out << ",";
      if (it != s.metrics.end()) out << format_g17(it->second);
    }
    for (int i = 0; i < n; ++i) out << "," << format_g17(s.w(i));
    out << "\r\n";
  }
}

void write_appraisal_json(const std::filesystem::path& path, double t,
                          const Eigen::MatrixXd& a) {
  nlohmann::ordered_json j;
  j["t"] = t;
  j["n"] = a.rows();
  auto rows = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    auto row = nlohmann::ordered_json::array();
    for (Eigen::Index k = 0; k < a.cols(); ++k) row.push_back(a(i, k));
    rows.push_back(std::move(row));
  }
  j["A"] = std::move(rows);
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string());
  }
  out << j.dump(2) << "\n";
}

namespace {

unsigned char gray_level(double v) {
  double clamped = std::min(std::max(v, 0.0), 1.0);
  // darker = larger entry
  return static_cast<unsigned char>(std::lround(255.0 * (1.0 - clamped)));
}

}  // namespace

void write_appraisal_pgm(const std::filesystem::path& path,
                         const Eigen::MatrixXd& a, int cell) {
  int n = static_cast<int>(a.rows());
  int dim = n * cell;
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string());
  }
  out << "P5\n" << dim << " " << dim << "\n255\n";
  std::string row(static_cast<size_t>(dim), '\0');
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      unsigned char g = gray_level(a(i, j));
      for (int c = 0; c < cell; ++c) row[static_cast<size_t>(j) * cell + c] =
          static_cast<char>(g);
    }
    for (int c = 0; c < cell; ++c) out.write(row.data(), dim);
  }
}

void write_appraisal_svg(const std::filesystem::path& path,
                         const Eigen::MatrixXd& a, int cell) {
  int n = static_cast<int>(a.rows());
  int dim = n * cell;
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string());
  }
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << dim
      << "\" height=\"" << dim << "\">\n";
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      int g = gray_level(a(i, j));
      out << "  <rect x=\"" << j * cell << "\" y=\"" << i * cell
          << "\" width=\"" << cell << "\" height=\"" << cell
          << "\" fill=\"rgb(" << g << "," << g << "," << g << ")\"/>\n";
    }
  }
  out << "</svg>\n";
}

}  // namespace teamsim
