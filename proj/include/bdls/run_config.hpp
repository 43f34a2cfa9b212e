#ifndef BDLS_RUN_CONFIG_HPP
#define BDLS_RUN_CONFIG_HPP

#include <optional>
#include <string>
#include <vector>

#include "bdls/bd_system.hpp"
#include "bdls/initial_data.hpp"
#include "bdls/ls_solver.hpp"
#include "bdls/rates.hpp"

namespace bdls {

// Line-oriented `key = value` pairs under [section] headers. Values are kept
// as the literal strings they were written with, so echoing a config and
// re-parsing it reproduces the object exactly. Unknown sections or keys are
// rejected by name; numbers are plain base-10/scientific notation.
class RunConfig {
public:
  struct Entry {
    std::string key;
    std::string value;
  };
  struct Section {
    std::string name;
    std::vector<Entry> entries;
  };

  static RunConfig parse(const std::string& text);
  static RunConfig parse_file(const std::string& path);

  // Canonical text form; parse(echo()) == *this.
  std::string echo() const;

  bool operator==(const RunConfig& other) const;

  bool has(const std::string& section, const std::string& key) const;
  // Overrides or inserts; the key must be in the schema.
  void set(const std::string& section, const std::string& key,
           const std::string& value);
  // Inserts only if absent; used to materialize defaults before echoing.
  void set_default(const std::string& section, const std::string& key,
                   const std::string& value);
  // "section.key=value" form used by the --set flag.
  void set_from_spec(const std::string& spec);

  std::string get_string(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key) const;
  long get_long(const std::string& section, const std::string& key) const;
  bool get_bool(const std::string& section, const std::string& key) const;
  std::vector<double> get_double_list(const std::string& section,
                                      const std::string& key) const;
  std::vector<long> get_long_list(const std::string& section,
                                  const std::string& key) const;

  std::string get_or(const std::string& section, const std::string& key,
                     const std::string& fallback) const;
  double get_or(const std::string& section, const std::string& key,
                double fallback) const;
  long get_or(const std::string& section, const std::string& key,
              long fallback) const;

  const std::vector<Section>& sections() const { return sections_; }

private:
  std::vector<Section> sections_;
  const Entry* find(const std::string& section, const std::string& key) const;
  const Entry& require(const std::string& section, const std::string& key) const;
};

// Typed views assembled from the config; each getter names any missing or
// malformed key in its error.
RateFamily rate_family_from(const RunConfig& cfg);
InitialData initial_data_from(const RunConfig& cfg);
IntegratorConfig integrator_config_from(const RunConfig& cfg);
LSConfig ls_config_from(const RunConfig& cfg);

}  // namespace bdls

#endif
