#pragma once

#include <ostream>
#include <string>

namespace chix::io {

inline constexpr const char* kFormatVersion = "1";
inline constexpr const char* kLibraryVersion = "0.1.0";

// Exit codes shared by the library runner and the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitResource = 3;
inline constexpr int kExitNumerical = 4;

// Validates and executes a config (JSON text), writing the self-describing
// artifact(s) atomically. Returns an exit code; diagnostics go to `log`.
// Config schema:
//   { "version": "1", "command": "pickands|tail|scanstat|mc|compare",
//     "seed": <uint>, "threads": <uint>, "output": "<path>",
//     "params": { ... command-specific ... } }
// Unknown fields are rejected.
int run_config(const std::string& config_json, std::ostream& log,
               std::string* artifact_path = nullptr);

// Re-executes the config embedded in an artifact and verifies the stored
// results reproduce bit-exactly (text-identical canonical serialization).
// thread_override > 0 reruns with a different worker count; results must not
// change. Returns kExitOk on an exact match.
int replay(const std::string& artifact_path, std::ostream& log, unsigned thread_override = 0);

// FNV-1a 64-bit checksum used to detect artifact tampering.
std::uint64_t fnv1a64(const std::string& data);

std::string read_text_file(const std::string& path);
void write_text_file_atomic(const std::string& path, const std::string& content);

}  // namespace chix::io
