#include <fstream>

#include <json.hpp>

#include "spectral_transfer/dataio.hpp"

namespace spectral_transfer::dataio {

namespace {

const char* const kRoles[] = {"primary_spectra", "secondary_spectra", "responses",
                              "primary_standards", "secondary_standards"};

bool known_role(const std::string& role) {
  for (const char* r : kRoles) {
    if (role == r) {
      return true;
    }
  }
  return false;
}

}  // namespace

const std::filesystem::path& DatasetManifest::file(const std::string& role) const {
  auto it = files.find(role);
  if (it == files.end()) {
    throw InputError("manifest '" + name + "' has no file for role '" + role + "'");
  }
  return it->second;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open manifest " + path.string());
  }
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("manifest " + path.string() + ": " + e.what());
  }

  if (!doc.is_object()) {
    throw InputError("manifest " + path.string() + ": expected a JSON object");
  }
  const int version = doc.value("version", 0);
  if (version != DatasetManifest::kVersion) {
    throw InputError("manifest " + path.string() + ": unsupported version " +
                     std::to_string(version));
  }

  DatasetManifest m;
  m.name = doc.value("name", std::string("unnamed"));
  m.primary_label = doc.value("primary_label", std::string("primary"));
  m.secondary_label = doc.value("secondary_label", std::string("secondary"));
  m.wavelength_start_nm = doc.value("wavelength_start_nm", 0.0);
  m.wavelength_step_nm = doc.value("wavelength_step_nm", 0.0);

  if (!doc.contains("files") || !doc["files"].is_object()) {
    throw InputError("manifest " + path.string() + ": missing 'files' object");
  }
  const std::filesystem::path base = path.parent_path();
  for (const auto& [role, rel] : doc["files"].items()) {
    if (!known_role(role)) {
      throw InputError("manifest " + path.string() + ": unknown file role '" + role + "'");
    }
    if (!rel.is_string()) {
      throw InputError("manifest " + path.string() + ": file path for '" + role +
                       "' must be a string");
    }
    std::filesystem::path p = rel.get<std::string>();
    if (p.is_relative()) {
      p = base / p;
    }
    if (!std::filesystem::exists(p)) {
      throw InputError("manifest " + path.string() + ": file for role '" + role +
                       "' does not exist: " + p.string());
    }
    m.files[role] = p;
  }

  if (doc.contains("response_names")) {
    for (const auto& n : doc["response_names"]) {
      m.response_names.push_back(n.get<std::string>());
    }
  }
  if (m.response_names.empty()) {
    throw InputError("manifest " + path.string() + ": response_names must be non-empty");
  }
  return m;
}

void save_manifest(const std::filesystem::path& path, const DatasetManifest& manifest) {
  nlohmann::json doc;
  doc["version"] = DatasetManifest::kVersion;
  doc["name"] = manifest.name;
  doc["primary_label"] = manifest.primary_label;
  doc["secondary_label"] = manifest.secondary_label;
  doc["wavelength_start_nm"] = manifest.wavelength_start_nm;
  doc["wavelength_step_nm"] = manifest.wavelength_step_nm;
  doc["response_names"] = manifest.response_names;

  const std::filesystem::path base = path.parent_path();
  nlohmann::json files = nlohmann::json::object();
  for (const auto& [role, p] : manifest.files) {
    // Store paths relative to the manifest when possible.
    std::error_code ec;
    const std::filesystem::path rel = std::filesystem::relative(p, base, ec);
    files[role] = (ec || rel.empty()) ? p.string() : rel.string();
  }
  doc["files"] = files;

  write_text_atomic(path, doc.dump(2) + "\n");
}

}  // namespace spectral_transfer::dataio
