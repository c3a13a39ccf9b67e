#pragma once

#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sipf/diagnostics.hpp"
#include "sipf/driver.hpp"
#include "sipf/radial_fdm.hpp"
#include "sipf/studies.hpp"

namespace sipf {

/// Shortest decimal that round-trips.
std::string format_number(double v);

void write_diagnostics_csv(std::ostream& out, const DiagnosticsSeries& s);
void write_ratio_csv(std::ostream& out, const RatioSeries& r);
/// Rows step,time,particle_id,x,y,z; the header is written when `header` is set.
void write_particles_csv(std::ostream& out, long step, double time, const ParticleEnsemble& e, bool header);
void write_fdm_csv(std::ostream& out, const FdmResult& r);
void write_profile_csv(std::ostream& out, const RadialState& s, const RadialGrid& grid);
void write_convergence_csv(std::ostream& out, const ConvergenceResult& r);
void write_mass_scan_csv(std::ostream& out, const MassBracket& b);
void write_scaling_csv(std::ostream& out, const ScalingFits& f);

/// Parses what write_diagnostics_csv produced (entries only).
std::vector<StepDiagnostics> read_diagnostics_csv(std::istream& in);

std::string sha1_hex(std::string_view bytes);
/// Hash git assigns to a blob with these contents.
std::string git_blob_sha1(std::string_view bytes);
std::string read_file(const std::filesystem::path& p);
void write_file(const std::filesystem::path& p, std::string_view contents);

class RunManifest {
 public:
  explicit RunManifest(std::string command);

  void set_config(std::string echo) { config_echo_ = std::move(echo); }
  void add_input(const std::string& label, std::string_view contents);
  void add_stage(const std::string& name, double seconds) { stages_.emplace_back(name, seconds); }
  void add_note(const std::string& line) { notes_.push_back(line); }
  /// Records size and checksum of a file already written.
  void add_output(const std::filesystem::path& file, const std::filesystem::path& root);
  void set_status(std::string status) { status_ = std::move(status); }
  void finish();

  [[nodiscard]] std::string render() const;
  void write(const std::filesystem::path& file) const;

 private:
  struct Output {
    std::string path;
    std::uintmax_t size;
    std::string sha1;
  };
  std::string command_;
  std::string status_ = "completed";
  std::string config_echo_;
  std::chrono::system_clock::time_point start_, end_;
  std::vector<std::pair<std::string, std::string>> inputs_;
  std::vector<std::pair<std::string, double>> stages_;
  std::vector<std::string> notes_;
  std::vector<Output> outputs_;
};

/// Wall-clock seconds since construction.
class Stopwatch {
 public:
  Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
  [[nodiscard]] double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

}  // namespace sipf
