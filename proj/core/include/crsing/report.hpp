#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crsing/briot_bouquet.hpp"
#include "crsing/crmap.hpp"
#include "crsing/hypersurface.hpp"
#include "crsing/prolongation.hpp"

namespace crs {

/// One `key = value` line of an input file.  Values are either bare tokens
/// or double-quoted strings; `#` starts a comment outside quotes.
struct KeyValue {
  std::string key;
  std::string value;
  std::size_t line = 0;
  std::size_t column = 0;  ///< of the first character of the value text
};

/// ParseError on malformed lines or repeated keys.
std::vector<KeyValue> parse_key_values(std::string_view text);

/// ValidationError when the file cannot be read.
std::string read_text_file(const std::filesystem::path& path);

struct HypersurfaceSpec {
  Hypersurface surface;
  /// Declared infinite type; checked against the computed one.
  std::optional<int> m;
};

/// Keys: n, trunc, phi, optional m.
HypersurfaceSpec parse_hypersurface_spec(std::string_view text, std::optional<int> trunc_override = {});
std::string to_text(const HypersurfaceSpec& spec);

struct MapSpec {
  std::string source_path;
  std::string target_path;
  HypersurfaceSpec source;
  HypersurfaceSpec target;
  std::vector<Series> components;

  HoloMap map() const;
};

/// Keys: source, target (paths relative to base_dir), F1..F{n+1} in z1..zn, w.
MapSpec parse_map_spec(std::string_view text, const std::filesystem::path& base_dir,
                       std::optional<int> trunc_override = {});
std::string to_text(const MapSpec& spec);

/// Keys: N, order, optional trunc, f1..fN in t, y1..yN.
BBSystem parse_bb_system(std::string_view text, std::optional<int> trunc_override = {},
                         std::optional<int> order_override = {});
std::string to_text(const BBSystem& sys);

/// Keys: n, k, optional components, slots, order, trunc; samples as
/// "x1, x2; x1, x2"; closure series r.<i>.<a1>_.._<a2n>.<p> for every closure
/// slot and optional base values base.<i>.<a1>_.._<a2n>.<p>.
ProlongedSystem parse_prolonged_system(std::string_view text, std::optional<int> trunc_override = {},
                                       std::optional<int> order_override = {});
std::string to_text(const ProlongedSystem& ps);

/// Result of a pipeline run: canonical JSON and the exit code it implies.
struct RunOutcome {
  int exit_code = 0;
  std::string json;
  /// Human-readable lines for the terminal.
  std::string summary;
};

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitInvariant = 2, kExitParse = 3 };

/// Maps library exceptions onto the exit-code contract.
int exit_code_for(const std::exception& e);

RunOutcome report_hypersurface(const HypersurfaceSpec& spec);
RunOutcome report_map(const MapSpec& spec);
RunOutcome report_bb(const BBSystem& sys, std::optional<double> oracle_t0 = {});
RunOutcome report_prolongation(const ProlongedSystem& ps);
/// Built-in corpus with expected verdicts.
RunOutcome run_examples();

/// The corpus hypersurfaces by name (sz1c1, power-k2..4, arctan-implicit).
std::vector<std::pair<std::string, HypersurfaceSpec>> corpus_hypersurfaces();
/// Im w = theta(s, arctan(z1 c1)) where t = theta solves t = xi (s^2 + t^2).
Hypersurface arctan_implicit_surface(int trunc);

}  // namespace crs
