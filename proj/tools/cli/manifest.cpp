#include "manifest.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "zakharov/errors.hpp"

namespace zlab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string num(const json& v) {
  if (v.is_number()) return fmt(v.get<double>());
  if (v.is_null()) return "-";
  return v.dump();
}

}  // namespace

Manifest::Manifest(fs::path dir) : dir_(std::move(dir)) {
  doc_["checks"] = json::array();
  doc_["outputs"] = json::array();
  doc_["notes"] = json::array();
}

bool Manifest::check(const std::string& name, bool pass, double value, double limit,
                     const std::string& detail) {
  json c{{"name", name}, {"pass", pass}, {"value", value}, {"limit", limit}};
  if (!detail.empty()) c["detail"] = detail;
  doc_["checks"].push_back(std::move(c));
  return pass;
}

bool Manifest::all_passed() const {
  for (const auto& c : doc_["checks"])
    if (!c["pass"].get<bool>()) return false;
  return true;
}

void Manifest::output(const std::string& file) {
  for (const auto& f : doc_["outputs"])
    if (f["file"] == file) return;
  doc_["outputs"].push_back({{"file", file}});
}

void Manifest::note(const std::string& text) { doc_["notes"].push_back(text); }

void Manifest::write() const {
  json doc = doc_;
  json listed = json::array();
  for (const auto& f : doc_["outputs"]) {
    const fs::path p = dir_ / f["file"].get<std::string>();
    std::error_code ec;
    const auto size = fs::file_size(p, ec);
    if (ec) continue;  // never list a file that is not there
    listed.push_back({{"file", f["file"]}, {"bytes", size}});
  }
  doc["outputs"] = listed;
  const fs::path target = dir_ / kManifestName;
  const fs::path tmp = dir_ / (std::string(kManifestName) + ".tmp");
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << doc.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string report(const fs::path& dir) {
  const fs::path path = dir / kManifestName;
  std::ifstream in(path);
  if (!in) throw zakharov::InvalidArgument("no manifest in '" + dir.string() + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw zakharov::InvalidArgument("corrupt manifest '" + path.string() + "': " + e.what());
  }
  if (!doc.is_object() || !doc.contains("command") || !doc.contains("status") || !doc.contains("checks"))
    throw zakharov::InvalidArgument("corrupt manifest '" + path.string() + "': missing fields");

  std::ostringstream out;
  out << "command   " << doc["command"].get<std::string>() << '\n';
  out << "status    " << doc["status"].get<std::string>() << " (exit " << doc.value("exit_code", -1)
      << ")\n";
  out << "version   " << doc.value("version", std::string("?")) << '\n';
  if (doc.contains("error")) out << "error     " << doc["error"].get<std::string>() << '\n';

  if (doc.contains("config")) {
    out << "\nconfig\n";
    for (const auto& [k, v] : doc["config"].items()) out << "  " << k << " = " << v.get<std::string>() << '\n';
  }

  out << "\nchecks\n";
  if (doc["checks"].empty()) out << "  (none)\n";
  for (const auto& c : doc["checks"]) {
    char line[256];
    std::snprintf(line, sizeof line, "  %-4s %-32s value %-12s limit %s\n",
                  c.value("pass", false) ? "PASS" : "FAIL", c.value("name", std::string()).c_str(),
                  num(c.value("value", json())).c_str(), num(c.value("limit", json())).c_str());
    out << line;
  }

  if (doc.contains("conservation")) {
    out << "\nconservation\n";
    for (const auto& [k, v] : doc["conservation"].items()) out << "  " << k << " " << num(v) << '\n';
  }
  if (doc.contains("estimates")) {
    out << "\nsup ratios\n";
    for (const auto& [k, v] : doc["estimates"].items()) out << "  " << k << " " << num(v["sup_ratio"]) << '\n';
  }
  if (doc.contains("scan")) {
    out << "\nfitted exponents\n";
    for (const auto& row : doc["scan"])
      out << "  s=" << row["s"].get<std::string>() << " l=" << row["l"].get<std::string>() << " "
          << num(row["exponent"]) << (row["inside"].get<bool>() ? " inside" : " outside") << '\n';
  }
  if (!doc["notes"].empty()) {
    out << "\nnotes\n";
    for (const auto& n : doc["notes"]) out << "  " << n.get<std::string>() << '\n';
  }
  out << "\noutputs\n";
  for (const auto& f : doc["outputs"]) out << "  " << f["file"].get<std::string>() << '\n';
  return out.str();
}

}  // namespace zlab
