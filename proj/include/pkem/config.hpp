#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "pkem/ikem.hpp"
#include "pkem/params.hpp"
#include "pkem/source.hpp"

// JSON documents and instance files. Malformed input throws MalformedError.
namespace pkem::config {

using Json = nlohmann::ordered_json;

// {"alphabet":[ax,ay,az], "n":n, "pxyz":[[x,y,z,prob],...]} where prob is a
// number or an "a/b" string; omitted entries are zero. Shorthand:
// {"bsc":{"p":p, "q":q, "n":n}}.
SourceSpec source_from_json(const Json& j);
Json source_to_json(const SourceSpec& s);

// Full parameter set, as written by `pkem params`.
IkemParams params_from_json(const Json& j);
Json params_to_json(const IkemParams& p);

// {"epsilon", "sigma", "delta", "q_e", "q_d", "t", "nu", "w", "ell"}, all optional.
DeriveRequest request_from_json(const Json& j);

// A document with "t", "ell" and "nu" is a parameter set; anything else is a
// derivation request with a "source" and a "mode". `mode` overrides the
// document's mode when non-empty.
IkemParams resolve_params(const Json& j, const std::string& mode = "");

Json read_json(const std::filesystem::path& path);
Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const uint8_t> bytes);

// One byte per symbol.
SymbolString read_symbols(const std::filesystem::path& path, unsigned n, unsigned alphabet);

}  // namespace pkem::config
