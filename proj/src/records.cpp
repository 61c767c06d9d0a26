#include "starkwg/records.hpp"

#include <charconv>
#include <cstdio>
#include <ctime>

#include "starkwg/errors.hpp"

namespace starkwg {

std::string iso8601_utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json record_to_json(const ResultRecord& r) {
  return nlohmann::json{{"config_hash", r.config_hash},
                        {"timestamp", r.timestamp},
                        {"subcommand", r.subcommand},
                        {"parameters", r.parameters},
                        {"outputs", r.outputs},
                        {"solver", r.solver}};
}

nlohmann::json complex_pair(std::complex<double> z) {
  return nlohmann::json::array({z.real(), z.imag()});
}

nlohmann::json estimate_json(const ResonanceEstimate& est) {
  return nlohmann::json{{"F", est.F},
                        {"Z", complex_pair(est.Z)},
                        {"beta_used", est.beta_used},
                        {"beta_window", {est.beta_window_lo, est.beta_window_hi}},
                        {"plateau_score", est.plateau_score},
                        {"spread", est.spread},
                        {"residual", est.residual},
                        {"E0", est.E0},
                        {"theta0", est.theta0},
                        {"grid_fingerprint", est.grid_fingerprint},
                        {"plateau_warning", est.plateau_warning},
                        {"over_field_ceiling", est.over_field_ceiling}};
}

std::string format_double(double x) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

RecordWriter::RecordWriter(const std::string& path) : path_(path) {
  if (!path_.empty()) {
    file_.open(path_, std::ios::app);
    if (!file_)
      throw ConfigError("records: cannot open '" + path_ + "' for appending");
  }
}

void RecordWriter::append(const ResultRecord& r) {
  const std::string line = record_to_json(r).dump();
  if (path_.empty()) {
    std::printf("%s\n", line.c_str());
    std::fflush(stdout);
  } else {
    file_ << line << '\n';
    file_.flush();
  }
}

void write_sweep_csv(const std::string& path,
                     const std::vector<ResonanceEstimate>& rows) {
  std::ofstream out(path, std::ios::trunc);
  if (!out)
    throw ConfigError("records: cannot open '" + path + "' for writing");
  out << "F,re_Z,im_Z,beta_used,plateau_score,residual\n";
  for (const ResonanceEstimate& e : rows) {
    out << format_double(e.F) << ',' << format_double(e.Z.real()) << ','
        << format_double(e.Z.imag()) << ',' << format_double(e.beta_used)
        << ',' << format_double(e.plateau_score) << ','
        << format_double(e.residual) << '\n';
  }
}

}  // namespace starkwg
