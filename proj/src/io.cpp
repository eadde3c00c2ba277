#include "curvednb/io.hpp"

#include <cstdio>
#include <fstream>

namespace curvednb {

namespace {

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open '" + path + "' for writing");
  }
  return out;
}

void finish_output(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) {
    throw IoError("write to '" + path + "' failed");
  }
}

}  // namespace

std::string format_real(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_trajectory_csv(const std::vector<AmbientState>& series,
                          const std::string& path) {
  if (series.empty()) {
    throw ValidationError("write_trajectory_csv: empty series");
  }
  const int n = series.front().body_count();
  const int dim = static_cast<int>(series.front().positions.rows());

  std::ofstream out = open_output(path);
  out << "t";
  for (int i = 1; i <= n; ++i) {
    for (int m = 1; m <= dim; ++m) {
      out << ",q" << i << "_x" << m;
    }
  }
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      out << ",d" << i << "_" << j;
    }
  }
  out << "\n";

  for (const AmbientState& state : series) {
    out << format_real(state.time);
    for (int i = 0; i < n; ++i) {
      for (int m = 0; m < dim; ++m) {
        out << "," << format_real(state.positions(m, i));
      }
    }
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        out << ","
            << format_real((state.positions.col(i) - state.positions.col(j))
                               .norm());
      }
    }
    out << "\n";
  }
  finish_output(out, path);
}

void write_min_distance_csv(const MinDistanceReport& report,
                            const std::string& path) {
  std::ofstream out = open_output(path);
  out << "record_id,r,n,min_distance\n";
  for (const MinDistanceRow& row : report.rows) {
    out << row.record_id << "," << format_real(row.r) << "," << row.n << ","
        << format_real(row.min_distance) << "\n";
  }
  finish_output(out, path);
}

void write_boundedness_csv(const BoundednessReport& report,
                           const std::string& path) {
  std::ofstream out = open_output(path);
  out << "r,A_squared\n";
  for (const BoundednessRow& row : report.grid) {
    out << format_real(row.r) << "," << format_real(row.a_squared) << "\n";
  }
  finish_output(out, path);
}

void write_cluster_blowup_csv(const ClusterBlowupReport& report,
                              const std::string& path) {
  std::ofstream out = open_output(path);
  out << "delta,pair_term\n";
  for (const ClusterBlowupRow& row : report.rows) {
    out << format_real(row.delta) << "," << format_real(row.pair_term)
        << "\n";
  }
  finish_output(out, path);
}

}  // namespace curvednb
