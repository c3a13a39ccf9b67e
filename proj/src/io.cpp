#include "sipf/io.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cmath>
#include <ctime>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sipf {

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_diagnostics_csv(std::ostream& out, const DiagnosticsSeries& s) {
  out << "time,c_inf,c0,variance\n";
  for (const auto& e : s.entries)
    out << format_number(e.time) << ',' << format_number(e.c_inf) << ',' << format_number(e.c0) << ','
        << format_number(e.variance) << '\n';
}

void write_ratio_csv(std::ostream& out, const RatioSeries& r) {
  out << "time,ratio\n";
  for (std::size_t i = 0; i < r.time.size(); ++i)
    out << format_number(r.time[i]) << ',' << format_number(r.ratio[i]) << '\n';
}

void write_particles_csv(std::ostream& out, long step, double time, const ParticleEnsemble& e, bool header) {
  if (header) out << "step,time,particle_id,x,y,z\n";
  const std::string prefix = std::to_string(step) + ',' + format_number(time) + ',';
  for (std::size_t p = 0; p < e.size(); ++p) {
    const auto& x = e.positions[p];
    out << prefix << p << ',' << format_number(x.x) << ',' << format_number(x.y) << ',' << format_number(x.z)
        << '\n';
  }
}

void write_fdm_csv(std::ostream& out, const FdmResult& r) {
  out << "time,sup_c,mass\n";
  for (const auto& s : r.series)
    out << format_number(s.time) << ',' << format_number(s.sup_c) << ',' << format_number(s.mass) << '\n';
}

void write_profile_csv(std::ostream& out, const RadialState& s, const RadialGrid& grid) {
  out << "r,rho,c\n";
  for (std::size_t i = 0; i < s.rho.size(); ++i)
    out << format_number(double(i) * grid.h()) << ',' << format_number(s.rho[i]) << ',' << format_number(s.c[i])
        << '\n';
}

void write_convergence_csv(std::ostream& out, const ConvergenceResult& r) {
  out << axis_name(r.axis) << ",l2_error,c0_error,c0_final\n";
  for (const auto& row : r.rows)
    out << format_number(row.value) << ',' << format_number(row.l2_error) << ',' << format_number(row.c0_error) << ','
        << format_number(row.c0_final) << '\n';
}

void write_mass_scan_csv(std::ostream& out, const MassBracket& b) {
  out << "mass,blowup,onset,evidence\n";
  for (const auto& v : b.evaluated)
    out << format_number(v.mass) << ',' << (v.blowup ? 1 : 0) << ',' << format_number(v.onset) << ",\""
        << v.evidence << "\"\n";
}

void write_scaling_csv(std::ostream& out, const ScalingFits& f) {
  out << "H,sup_c_inf\n";
  for (std::size_t i = 0; i < f.modes.size(); ++i) out << f.modes[i] << ',' << format_number(f.sup_cinf[i]) << '\n';
}

std::vector<StepDiagnostics> read_diagnostics_csv(std::istream& in) {
  std::vector<StepDiagnostics> out;
  std::string line;
  if (!std::getline(in, line) || line.rfind("time,", 0) != 0) throw std::runtime_error("diagnostics csv: bad header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    StepDiagnostics d;
    double* fields[] = {&d.time, &d.c_inf, &d.c0, &d.variance};
    std::istringstream row(line);
    std::string cell;
    for (double* f : fields) {
      if (!std::getline(row, cell, ',')) throw std::runtime_error("diagnostics csv: short row");
      *f = std::stod(cell);
    }
    out.push_back(d);
  }
  return out;
}

std::string sha1_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha1(), nullptr) != 1)
    throw std::runtime_error("sha1 failed");
  static const char* hex = "0123456789abcdef";
  std::string s;
  for (unsigned i = 0; i < len; ++i) {
    s += hex[md[i] >> 4];
    s += hex[md[i] & 15];
  }
  return s;
}

std::string git_blob_sha1(std::string_view bytes) {
  std::string buf = "blob " + std::to_string(bytes.size());
  buf.push_back('\0');
  buf.append(bytes);
  return sha1_hex(buf);
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& p, std::string_view contents) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out.write(contents.data(), std::streamsize(contents.size()));
  if (!out) throw std::runtime_error("write failed: " + p.string());
}

namespace {

std::string iso_utc(std::chrono::system_clock::time_point t) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

RunManifest::RunManifest(std::string command)
    : command_(std::move(command)), start_(std::chrono::system_clock::now()), end_(start_) {}

void RunManifest::add_input(const std::string& label, std::string_view contents) {
  inputs_.emplace_back(label, git_blob_sha1(contents));
}

void RunManifest::add_output(const std::filesystem::path& file, const std::filesystem::path& root) {
  const std::string data = read_file(file);
  outputs_.push_back({std::filesystem::relative(file, root).generic_string(), data.size(), sha1_hex(data)});
}

void RunManifest::finish() { end_ = std::chrono::system_clock::now(); }

std::string RunManifest::render() const {
  std::ostringstream os;
  os << "command = " << command_ << '\n'
     << "status = " << status_ << '\n'
     << "started = " << iso_utc(start_) << '\n'
     << "finished = " << iso_utc(end_) << '\n';
  os << "\n[config]\n" << config_echo_;
  os << "\n[inputs]\n";
  for (const auto& [label, hash] : inputs_) os << label << ' ' << hash << '\n';
  os << "\n[stages]\n";
  for (const auto& [name, sec] : stages_) os << name << ' ' << format_number(sec) << " s\n";
  if (!notes_.empty()) {
    os << "\n[notes]\n";
    for (const auto& n : notes_) os << n << '\n';
  }
  os << "\n[outputs]\n";
  for (const auto& o : outputs_) os << o.path << ' ' << o.size << ' ' << o.sha1 << '\n';
  return os.str();
}

void RunManifest::write(const std::filesystem::path& file) const { write_file(file, render()); }

}  // namespace sipf
