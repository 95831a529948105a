#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pichan/error.hpp"
#include "pichan/program.hpp"

namespace pichan {

class ManifestError : public Error {
 public:
  using Error::Error;
};
class ManifestParseError : public ManifestError {
 public:
  using ManifestError::ManifestError;
};
class UnknownSort : public ManifestError {
 public:
  using ManifestError::ManifestError;
};
class DuplicateMethod : public ManifestError {
 public:
  using ManifestError::ManifestError;
};
class AliasClash : public ManifestError {
 public:
  using ManifestError::ManifestError;
};

struct ManifestMethod {
  std::string name;
  std::vector<BaseSort> params;
  BaseSort returns = BaseSort::Void;
};

// Signature description of one host class, standing in for the assembly a
// real interface generator would scan.
struct ClassManifest {
  std::string class_name;
  bool constructor_effects = false;  // informational only
  std::vector<ManifestMethod> methods;
};

// {"class": "...", "constructor_effects": bool?, "methods": [{"name", "params", "returns"}]}
ClassManifest parse_manifest(std::string_view json);
// Throws IoError if the file cannot be read.
ClassManifest load_manifest(const std::string& path);

// The extern block for `m`: call channels named after the methods, return
// channels Ret1..RetN in method order (suffixed with `_` on collisions), and
// an explicit canonical protocol per method. Throws AliasClash.
ExternDecl interface_decl(const ClassManifest& m, const std::string& alias);
std::string generate_interface(const ClassManifest& m, const std::string& alias);

}  // namespace pichan
