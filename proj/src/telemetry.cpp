#include "boresight/telemetry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "boresight/errors.hpp"

namespace boresight {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

MercatorPoint mercator(const Vec3& unit) {
  const double lat = std::asin(std::clamp(unit.z(), -1.0, 1.0));
  const double lon = std::atan2(unit.y(), unit.x());
  // asinh(tan(lat)) is ln tan(pi/4 + lat/2) without the equator cancellation
  return MercatorPoint{lon, std::asinh(std::tan(lat))};
}

void write_telemetry_csv(const std::string& path,
                         const std::vector<TelemetryRecord>& records) {
  std::ofstream file(path);
  if (!file) {
    throw Error(ErrorCode::IoError, "cannot write telemetry file '" + path + "'");
  }

  const std::size_t zones = records.empty() ? 0 : records.front().zone_cos.size();
  file << "t,x_e,theta_deg,eps_q,rho_q,omega_q_raw,omega_q,w1,w2,w3,u1,u2,u3";
  for (std::size_t n = 1; n <= zones; ++n) file << ",gamma_" << n;
  file << ",theta_eff_1,theta_eff_2,theta_eff_3,g_a,filt_err,V_omega,V_B\n";

  for (const TelemetryRecord& r : records) {
    file << fmt(r.t) << ',' << fmt(r.x_e) << ',' << fmt(r.theta_deg) << ','
         << fmt(r.eps) << ',' << fmt(r.rho) << ',' << fmt(r.freeze_raw) << ','
         << fmt(r.freeze);
    for (int i = 0; i < 3; ++i) file << ',' << fmt(r.w[i]);
    for (int i = 0; i < 3; ++i) file << ',' << fmt(r.u[i]);
    for (double g : r.zone_cos) file << ',' << fmt(g);
    for (int i = 0; i < 3; ++i) file << ',' << fmt(r.theta_eff[i]);
    file << ',' << fmt(r.filter_gain) << ',' << fmt(r.filter_error) << ','
         << fmt(r.v_rate_barrier) << ',' << fmt(r.v_blf) << '\n';
  }
  if (!file) {
    throw Error(ErrorCode::IoError, "failed writing telemetry file '" + path + "'");
  }
}

std::vector<TelemetryRecord> read_telemetry_csv(const std::string& path) {
  std::ifstream file(path);
  if (!file) {
    throw Error(ErrorCode::IoError, "cannot open telemetry file '" + path + "'");
  }

  std::string line;
  if (!std::getline(file, line)) {
    throw Error(ErrorCode::IoError, "telemetry file '" + path + "' is empty");
  }

  std::vector<std::string> columns;
  {
    std::istringstream header(line);
    std::string name;
    while (std::getline(header, name, ',')) columns.push_back(name);
  }
  std::size_t zones = 0;
  for (const std::string& name : columns) {
    if (name.rfind("gamma_", 0) == 0) ++zones;
  }
  const std::size_t expected = 20 + zones;
  if (columns.size() != expected || columns.front() != "t") {
    throw Error(ErrorCode::IoError, "unrecognized telemetry header in '" + path + "'");
  }

  std::vector<TelemetryRecord> records;
  std::vector<double> values;
  values.reserve(expected);
  while (std::getline(file, line)) {
    if (line.empty()) continue;
    values.clear();
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) values.push_back(std::strtod(cell.c_str(), nullptr));
    if (values.size() != expected) {
      throw Error(ErrorCode::IoError, "malformed telemetry row in '" + path + "'");
    }
    TelemetryRecord r;
    std::size_t i = 0;
    r.t = values[i++];
    r.x_e = values[i++];
    r.theta_deg = values[i++];
    r.eps = values[i++];
    r.rho = values[i++];
    r.freeze_raw = values[i++];
    r.freeze = values[i++];
    for (int k = 0; k < 3; ++k) r.w[k] = values[i++];
    for (int k = 0; k < 3; ++k) r.u[k] = values[i++];
    r.zone_cos.assign(values.begin() + i, values.begin() + i + zones);
    i += zones;
    for (int k = 0; k < 3; ++k) r.theta_eff[k] = values[i++];
    r.filter_gain = values[i++];
    r.filter_error = values[i++];
    r.v_rate_barrier = values[i++];
    r.v_blf = values[i++];
    records.push_back(std::move(r));
  }
  return records;
}

void write_plot_data_csv(const std::string& path,
                         const std::vector<TelemetryRecord>& records) {
  std::ofstream file(path);
  if (!file) {
    throw Error(ErrorCode::IoError, "cannot write plot file '" + path + "'");
  }
  file << "t,b_ix,b_iy,b_iz,mercator_x,mercator_y\n";
  for (const TelemetryRecord& r : records) {
    const MercatorPoint m = mercator(r.boresight_inertial);
    file << fmt(r.t) << ',' << fmt(r.boresight_inertial.x()) << ','
         << fmt(r.boresight_inertial.y()) << ',' << fmt(r.boresight_inertial.z())
         << ',' << fmt(m.x) << ',' << fmt(m.y) << '\n';
  }
  if (!file) {
    throw Error(ErrorCode::IoError, "failed writing plot file '" + path + "'");
  }
}

namespace {

nlohmann::json summary_json(const RunSummary& s) {
  nlohmann::json j;
  j["pass"] = s.pass;
  j["terminal_accuracy_xe"] = s.terminal_accuracy_xe;
  j["terminal_accuracy_deg"] = s.terminal_accuracy_deg;
  j["max_abs_rate_dps"] = s.max_abs_rate_dps;
  j["max_eps_q"] = s.max_eps;
  j["min_zone_margin"] = s.min_zone_margin;
  nlohmann::json intervals = nlohmann::json::array();
  for (const FreezeInterval& f : s.freeze_intervals) {
    intervals.push_back({f.start, f.end});
  }
  j["freeze_intervals"] = intervals;
  if (s.first_violation) {
    j["first_violation"] = {{"t", s.first_violation->t},
                            {"kind", to_string(s.first_violation->code)},
                            {"detail", s.first_violation->detail}};
  } else {
    j["first_violation"] = nullptr;
  }
  return j;
}

}  // namespace

std::string summary_to_json(const RunSummary& summary) {
  return summary_json(summary).dump(2);
}

void write_summary_json(const std::string& path, const RunSummary& summary) {
  std::ofstream file(path);
  if (!file) {
    throw Error(ErrorCode::IoError, "cannot write summary file '" + path + "'");
  }
  file << summary_to_json(summary) << '\n';
  if (!file) {
    throw Error(ErrorCode::IoError, "failed writing summary file '" + path + "'");
  }
}

std::vector<std::string> check_telemetry(const std::vector<TelemetryRecord>& records,
                                         const TelemetryLimits& limits) {
  std::vector<std::string> problems;
  const auto flag = [&](double t, const std::string& what) {
    problems.push_back("t=" + fmt(t) + ": " + what);
  };

  for (const TelemetryRecord& r : records) {
    const bool finite = std::isfinite(r.t) && std::isfinite(r.x_e) &&
                        std::isfinite(r.eps) && std::isfinite(r.rho) &&
                        r.w.allFinite() && r.u.allFinite();
    if (!finite) {
      flag(r.t, "non-finite record");
      continue;
    }
    if (r.x_e < 0.0 || r.x_e > 2.0) flag(r.t, "pointing error out of [0, 2]");
    for (int i = 0; i < 3; ++i) {
      if (!(std::abs(r.w[i]) < limits.rate_limit)) {
        flag(r.t, "rate component " + std::to_string(i + 1) + " at or past the limit");
      }
    }
    if (limits.check_envelope && !(r.eps < 1.0)) {
      flag(r.t, "transformed error at or past the envelope");
    }
    if (limits.zone_boundaries.size() == r.zone_cos.size()) {
      for (std::size_t n = 0; n < r.zone_cos.size(); ++n) {
        if (!(r.zone_cos[n] < limits.zone_boundaries[n])) {
          flag(r.t, "boresight inside forbidden zone " + std::to_string(n + 1));
        }
      }
    }
  }
  if (!limits.zone_boundaries.empty() && !records.empty() &&
      limits.zone_boundaries.size() != records.front().zone_cos.size()) {
    problems.push_back("zone count mismatch between limits and telemetry");
  }
  return problems;
}

}  // namespace boresight
