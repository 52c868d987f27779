#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fijord/fialg.hpp"
#include "fijord/jordan.hpp"
#include "fijord/linmap.hpp"

namespace fijord {

/// One verification instance, as read from a config file. The format is
/// flat `key = value` lines grouped under `[instance]`, `[map]` and
/// `[suite]` sections; `#` starts a comment. See the repository README
/// for the exact grammar.
struct InstanceConfig {
  std::uint32_t modulus = 0;
  std::vector<std::string> elements;
  std::vector<std::pair<std::string, std::string>> pairs;
  std::size_t max_elements = 32;

  std::string map_spec = "identity";

  std::vector<std::string> checks;  // suite names; empty means every suite
  std::uint64_t seed = 0;
  std::uint64_t enum_cap = std::uint64_t(1) << 20;
  std::uint32_t samples = 10000;
  std::string report_path;  // empty: stdout only
};

/// ParseError on malformed text, unknown sections/keys, or failed
/// invariants (missing modulus/elements, element count above the cap).
InstanceConfig parse_config_text(const std::string& text);
InstanceConfig load_config_file(const std::string& path);

/// Builds the incidence-ring context the config describes.
FiContextPtr build_context(const InstanceConfig& cfg);

/// Evaluates one map expression over the context. Grammar (arguments are
/// `key=value` tokens, children are parenthesized and `;`-separated):
///
///   identity | dproj | reversal [lambda=<labels,...>]
///   | inner [unit=random|<coords,...>] | jtwist class=<label> e=<k>
///   | jtwist blockwise e=<k> | matrix coords=<dim*dim values row-major>
///   | scale k=<k>(spec) | sum(spec; spec; ...)
///   | compose(spec; ...)            -- rightmost child applied first
///   | near_sum(hom-spec; antihom-spec)
///
/// `rng` feeds `inner unit=random` so that equal seeds draw equal units.
LinearMap eval_map_spec(const FiContextPtr& ctx, const std::string& spec, SplitMix64& rng);

/// Top-level map construction: evaluates cfg.map_spec and requires the
/// result to be bijective (NotInvertible otherwise).
AdditiveMap build_map(const FiContextPtr& ctx, const InstanceConfig& cfg,
                      const SampleBudget& budget);

}  // namespace fijord
