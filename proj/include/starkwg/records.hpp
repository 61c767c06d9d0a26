#ifndef STARKWG_RECORDS_HPP
#define STARKWG_RECORDS_HPP

#include <complex>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "starkwg/resonance.hpp"

namespace starkwg {

// One emitted result. The payload trees hold plain JSON; doubles serialize
// with shortest-round-trip formatting, so identical runs produce
// byte-identical numeric fields. The timestamp is the one field allowed to
// differ between identical reruns.
struct ResultRecord {
  std::string config_hash;
  std::string timestamp;
  std::string subcommand;
  nlohmann::json parameters = nlohmann::json::object();
  nlohmann::json outputs = nlohmann::json::object();
  nlohmann::json solver = nlohmann::json::object();
};

std::string iso8601_utc_now();

nlohmann::json record_to_json(const ResultRecord& r);

// [re, im] pair for eigenvalue-like payloads.
nlohmann::json complex_pair(std::complex<double> z);

// Everything worth persisting about one resonance estimate.
nlohmann::json estimate_json(const ResonanceEstimate& est);

// Shortest decimal that round-trips to the same double.
std::string format_double(double x);

// Append-only JSON-lines sink; an empty path streams to stdout.
class RecordWriter {
 public:
  explicit RecordWriter(const std::string& path);
  void append(const ResultRecord& r);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ofstream file_;
};

// Sweep table with columns F, re_Z, im_Z, beta_used, plateau_score,
// residual; every cell round-trips bit-exactly.
void write_sweep_csv(const std::string& path,
                     const std::vector<ResonanceEstimate>& rows);

}  // namespace starkwg

#endif
