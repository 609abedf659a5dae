#ifndef LVDELAY_CONFIG_HPP
#define LVDELAY_CONFIG_HPP

#include <optional>
#include <string>

#include "lvdelay/system_spec.hpp"

namespace lvd {

struct LoadedSpec {
  SystemSpec spec;
  std::optional<HistorySpec> history;  // present when the document has one
};

/// Parses and validates a JSON configuration document. Indices inside the
/// document are 1-based. Throws SpecError naming the offending key.
LoadedSpec load_spec(const std::string& config_text);

LoadedSpec load_spec_file(const std::string& path);

/// Serializes a spec (and optional history) back into the same schema.
/// Values round-trip bit-for-bit for finite inputs.
std::string save_spec(const SystemSpec& spec,
                      const HistorySpec* history = nullptr);

}  // namespace lvd

#endif
