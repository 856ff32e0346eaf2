#include "roast/key.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace roast {

using nlohmann::json;

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::Dmas: return "dmas";
    case Scheme::Gmas: return "gmas";
    case Scheme::RoastOs: return "roast-os";
    case Scheme::RoastSt: return "roast-st";
  }
  return "unknown";
}

Scheme parse_scheme(const std::string& name) {
  std::string n = name;
  std::transform(n.begin(), n.end(), n.begin(), [](unsigned char c) {
    return c == '_' ? '-' : static_cast<char>(std::tolower(c));
  });
  if (n == "dmas") return Scheme::Dmas;
  if (n == "gmas") return Scheme::Gmas;
  if (n == "roast-os" || n == "os") return Scheme::RoastOs;
  if (n == "roast-st" || n == "st") return Scheme::RoastSt;
  throw ParameterError("unknown scheme: " + name);
}

void SchemeParams::validate() const {
  if (!(payload > 0.0)) throw ParameterError("payload must be positive");
  if (t1 < 0 || t1 > 127) throw ParameterError("t1 must be in [0, 127]");
  if (t2 < 0.0) throw ParameterError("t2 must be non-negative");
  if (!(lambda > 0.0 && lambda <= 1.0)) throw ParameterError("lambda must be in (0, 1]");
  if (!(mu > 0.0 && mu <= 1.0)) throw ParameterError("mu must be in (0, 1]");
  if (stc_h < 2 || stc_h > 16) throw ParameterError("stc height must be in [2, 16]");
}

std::string key_to_json(const StegoKey& key) {
  json j;
  j["seed"] = key.seed;
  j["h"] = key.h;
  j["rs_n"] = key.rs_n;
  j["rs_k"] = key.rs_k;
  j["cover_qf"] = key.cover_qf;
  j["cover_qtable"] = key.cover_table.steps();
  j["scheme"] = scheme_name(key.scheme);
  j["params"] = {{"payload", key.params.payload}, {"t1", key.params.t1}, {"t2", key.params.t2},
                 {"lambda", key.params.lambda},   {"mu", key.params.mu}, {"stc_h", key.params.stc_h}};
  j["codewords"] = key.codewords;
  return j.dump(2);
}

StegoKey key_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("key: ") + e.what());
  }
  try {
    StegoKey key;
    key.seed = j.at("seed").get<std::uint64_t>();
    key.h = j.at("h").get<int>();
    key.rs_n = j.value("rs_n", 31);
    key.rs_k = j.value("rs_k", 15);
    key.cover_qf = j.at("cover_qf").get<int>();
    if (j.contains("cover_qtable")) {
      key.cover_table = QuantTable(j["cover_qtable"].get<std::array<int, kBlockSize>>(), key.cover_qf);
    } else {
      key.cover_table = build_qtable(key.cover_qf);
    }
    key.scheme = parse_scheme(j.at("scheme").get<std::string>());
    const json& p = j.at("params");
    key.params.scheme = key.scheme;
    key.params.payload = p.value("payload", key.params.payload);
    key.params.t1 = p.value("t1", key.params.t1);
    key.params.t2 = p.value("t2", key.params.t2);
    key.params.lambda = p.value("lambda", key.params.lambda);
    key.params.mu = p.value("mu", key.params.mu);
    key.params.stc_h = p.value("stc_h", key.h);
    key.codewords = j.at("codewords").get<std::size_t>();
    if (key.rs_n != 31 || key.rs_k != 15) throw FormatError("key: only RS(31,15) is supported");
    return key;
  } catch (const json::exception& e) {
    throw FormatError(std::string("key: ") + e.what());
  }
}

void save_key(const StegoKey& key, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << key_to_json(key) << '\n';
}

StegoKey load_key(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return key_from_json(ss.str());
}

}  // namespace roast
