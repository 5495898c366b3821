#include "cwave/io.hpp"

#include <chrono>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "cwave/version.hpp"

namespace cwave {

std::string format_g17(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string fnv1a64_hex(const std::string& data) {
  std::ostringstream os;
  os << std::hex << fnv1a64(data);
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

std::string profile_csv(const std::vector<double>& xs, const std::vector<double>& us) {
  if (xs.size() != us.size()) throw std::invalid_argument("profile columns differ in length");
  std::string out = "x,u\n";
  for (std::size_t i = 0; i < xs.size(); ++i)
    out += format_g17(xs[i]) + "," + format_g17(us[i]) + "\n";
  return out;
}

std::string snapshots_csv(const SimTrace& trace) {
  std::string out = "t,x,u\n";
  for (const auto& snap : trace.snapshots) {
    const std::string ts = format_g17(snap.t);
    for (std::size_t i = 0; i < snap.u.size(); ++i) {
      out += ts;
      out += ",";
      out += format_g17(static_cast<double>(i) * trace.dx);
      out += ",";
      out += format_g17(snap.u[i]);
      out += "\n";
    }
  }
  return out;
}

std::string snapshots_binary(const SimTrace& trace) {
  std::string out;
  auto put = [&out](const void* p, std::size_t n) {
    out.append(static_cast<const char*>(p), n);
  };
  for (const auto& snap : trace.snapshots) {
    const std::uint64_t n = snap.u.size();
    put(&n, sizeof n);  // little-endian on every supported target
    const double t = snap.t;
    put(&t, sizeof t);
    put(snap.u.data(), n * sizeof(double));
  }
  return out;
}

std::string diagnostics_json(const SimTrace& trace) {
  nlohmann::json j;
  j["dx"] = trace.dx;
  j["dt"] = trace.dt;
  j["blow_up"] = trace.blew_up;
  if (trace.blew_up) {
    j["blowup_time"] = trace.blowup_time;
    j["blowup_note"] = trace.blowup_note;
  }
  j["initial_mass"] = trace.initial_mass;
  j["max_rel_mass_drift"] = trace.max_rel_mass_drift;
  nlohmann::json masses = nlohmann::json::array();
  nlohmann::json times = nlohmann::json::array();
  for (std::size_t i = 0; i < trace.mass_series.size(); ++i) {
    masses.push_back(trace.mass_series[i]);
    times.push_back(i < trace.snapshots.size() ? trace.snapshots[i].t : 0.0);
  }
  j["t"] = times;
  j["mass"] = masses;
  nlohmann::json invs = nlohmann::json::array();
  for (const auto& inv : trace.inventories) {
    nlohmann::json items = nlohmann::json::array();
    for (const auto& p : inv.items) {
      nlohmann::json it;
      it["A"] = p.amplitude;
      it["x"] = p.center;
      it["L"] = p.half_width;
      if (p.speed_known) it["V"] = p.speed;
      items.push_back(it);
    }
    invs.push_back({{"items", items}, {"overlapping", inv.overlapping}});
  }
  j["inventory"] = invs;
  return j.dump(2);
}

void write_manifest(const std::string& out_dir, const std::string& subcommand,
                    const std::vector<std::string>& argv,
                    const std::vector<std::pair<std::string, std::string>>& input_hashes,
                    const std::vector<std::string>& output_paths, bool failed) {
  nlohmann::json j;
  j["subcommand"] = subcommand;
  j["argv"] = argv;
  j["version"] = kVersion;
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char buf[64];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
  j["timestamp"] = buf;
  nlohmann::json hashes = nlohmann::json::object();
  for (const auto& [name, h] : input_hashes) hashes[name] = h;
  j["input_hashes"] = hashes;
  j["outputs"] = output_paths;
  j["failed"] = failed;

  const std::filesystem::path dir =
      out_dir.empty() ? std::filesystem::current_path() : std::filesystem::path(out_dir);
  std::filesystem::create_directories(dir);
  write_text_file((dir / "manifest.json").string(), j.dump(2) + "\n");
}

}  // namespace cwave
