#include "prefender/config.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace prefender {

const char* attack_kind_name(AttackKind k) {
  switch (k) {
    case AttackKind::FLUSH_RELOAD: return "flush_reload";
    case AttackKind::EVICT_RELOAD: return "evict_reload";
    case AttackKind::PRIME_PROBE: return "prime_probe";
  }
  return "?";
}

const char* workload_kind_name(WorkloadKind k) {
  switch (k) {
    case WorkloadKind::SEQUENTIAL: return "sequential";
    case WorkloadKind::STRIDED: return "strided";
    case WorkloadKind::RANDOM: return "random";
    case WorkloadKind::DEP_CHAIN: return "dep_chain";
    case WorkloadKind::NESTED_2D: return "nested_2d";
  }
  return "?";
}

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::string s = trim(v);
  uint64_t out = 0;
  int base = 10;
  size_t off = 0;
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    base = 16;
    off = 2;
  }
  auto [p, ec] = std::from_chars(s.data() + off, s.data() + s.size(), out, base);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ConfigError("bad integer for " + key + ": '" + v + "'");
  return out;
}

int64_t parse_i64(const std::string& key, const std::string& v) {
  std::string s = trim(v);
  if (!s.empty() && s[0] == '-') return -static_cast<int64_t>(parse_u64(key, s.substr(1)));
  return static_cast<int64_t>(parse_u64(key, s));
}

bool parse_bool(const std::string& key, const std::string& v) {
  std::string s = trim(v);
  if (s == "true" || s == "1" || s == "on" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "off" || s == "no") return false;
  throw ConfigError("bad boolean for " + key + ": '" + v + "'");
}

AttackKind parse_attack_kind(const std::string& v) {
  std::string s = trim(v);
  if (s == "flush_reload" || s == "fr") return AttackKind::FLUSH_RELOAD;
  if (s == "evict_reload" || s == "er") return AttackKind::EVICT_RELOAD;
  if (s == "prime_probe" || s == "pp") return AttackKind::PRIME_PROBE;
  throw ConfigError("unknown attack kind '" + v + "'");
}

WorkloadKind parse_workload_kind(const std::string& v) {
  std::string s = trim(v);
  if (s == "sequential") return WorkloadKind::SEQUENTIAL;
  if (s == "strided") return WorkloadKind::STRIDED;
  if (s == "random") return WorkloadKind::RANDOM;
  if (s == "dep_chain") return WorkloadKind::DEP_CHAIN;
  if (s == "nested_2d") return WorkloadKind::NESTED_2D;
  throw ConfigError("unknown workload kind '" + v + "'");
}

void set_challenges(AttackSpec& a, const std::string& v) {
  a.c2_random_order = a.c3_noisy_instr = a.c4_noisy_access = false;
  std::string s = trim(v);
  if (s == "none" || s.empty()) return;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (tok == "c2") a.c2_random_order = true;
    else if (tok == "c3") a.c3_noisy_instr = true;
    else if (tok == "c4") a.c4_noisy_access = true;
    else throw ConfigError("unknown challenge '" + tok + "' (expected c2,c3,c4)");
  }
}

}  // namespace

void apply_config_key(SimConfig& cfg, const std::string& dotted, const std::string& value) {
  auto dot = dotted.find('.');
  if (dot == std::string::npos) throw ConfigError("expected section.key, got '" + dotted + "'");
  std::string sec = dotted.substr(0, dot);
  std::string key = dotted.substr(dot + 1);
  const std::string& v = value;

  if (sec == "cache") {
    if (key == "line_size") cfg.cache.line_size = parse_u64(dotted, v);
    else if (key == "l1_size") cfg.cache.l1_size = parse_u64(dotted, v);
    else if (key == "l1_ways") cfg.cache.l1_ways = static_cast<uint32_t>(parse_u64(dotted, v));
    else if (key == "l2_size") cfg.cache.l2_size = parse_u64(dotted, v);
    else if (key == "l2_ways") cfg.cache.l2_ways = static_cast<uint32_t>(parse_u64(dotted, v));
    else if (key == "page_size") cfg.cache.page_size = parse_u64(dotted, v);
    else if (key == "mshr_count") cfg.cache.mshr_count = static_cast<uint32_t>(parse_u64(dotted, v));
    else if (key == "mshr_merge_limit") cfg.cache.mshr_merge_limit = static_cast<uint32_t>(parse_u64(dotted, v));
    else if (key == "lat_l1_hit") cfg.cache.lat_l1_hit = static_cast<uint32_t>(parse_u64(dotted, v));
    else if (key == "lat_l2_hit") cfg.cache.lat_l2_hit = static_cast<uint32_t>(parse_u64(dotted, v));
    else if (key == "lat_mem") cfg.cache.lat_mem = static_cast<uint32_t>(parse_u64(dotted, v));
    else if (key == "phys_mem") cfg.cache.phys_mem = parse_u64(dotted, v);
    else throw ConfigError("unknown key " + dotted);
  } else if (sec == "st") {
    if (key == "enabled") cfg.st.enabled = parse_bool(dotted, v);
    else if (key == "bit_width") {
      uint64_t w = parse_u64(dotted, v);
      if (w != 64 && w != 16) throw ConfigError("st.bit_width must be 64 or 16");
      cfg.st.bit_width = static_cast<uint32_t>(w);
    } else if (key == "max_per_load") {
      uint64_t n = parse_u64(dotted, v);
      if (n != 1 && n != 2) throw ConfigError("st.max_per_load must be 1 or 2");
      cfg.st.max_per_load = static_cast<uint32_t>(n);
    } else throw ConfigError("unknown key " + dotted);
  } else if (sec == "at") {
    if (key == "enabled") cfg.at.enabled = parse_bool(dotted, v);
    else if (key == "buffer_count") cfg.at.buffer_count = static_cast<uint32_t>(parse_u64(dotted, v));
    else if (key == "entry_count") cfg.at.entry_count = static_cast<uint32_t>(parse_u64(dotted, v));
    else if (key == "valid_threshold") cfg.at.valid_threshold = static_cast<uint32_t>(parse_u64(dotted, v));
    else throw ConfigError("unknown key " + dotted);
  } else if (sec == "rp") {
    if (key == "enabled") cfg.rp.enabled = parse_bool(dotted, v);
    else if (key == "entry_count") cfg.rp.entry_count = static_cast<uint32_t>(parse_u64(dotted, v));
    else if (key == "unprotect_prefetch_limit") cfg.rp.unprotect_prefetch_limit = static_cast<uint32_t>(parse_u64(dotted, v));
    else if (key == "unprotect_idle_cycles") cfg.rp.unprotect_idle_cycles = parse_u64(dotted, v);
    else throw ConfigError("unknown key " + dotted);
  } else if (sec == "prefetcher") {
    if (key == "base") {
      std::string s = trim(v);
      if (s == "none") cfg.base = BasePrefetcher::NONE;
      else if (s == "tagged") cfg.base = BasePrefetcher::TAGGED;
      else if (s == "stride") cfg.base = BasePrefetcher::STRIDE;
      else throw ConfigError("prefetcher.base must be none|tagged|stride");
    } else throw ConfigError("unknown key " + dotted);
  } else if (sec == "stride") {
    if (key == "table_size") cfg.stride_table_size = static_cast<uint32_t>(parse_u64(dotted, v));
    else throw ConfigError("unknown key " + dotted);
  } else if (sec == "sim") {
    if (key == "bucket_cycles") cfg.bucket_cycles = parse_u64(dotted, v);
    else throw ConfigError("unknown key " + dotted);
  } else if (sec == "attack") {
    AttackSpec& a = cfg.attack;
    if (key == "kind") a.kind = parse_attack_kind(v);
    else if (key == "secret") a.secret = static_cast<int32_t>(parse_i64(dotted, v));
    else if (key == "k_lines") a.k_lines = static_cast<uint32_t>(parse_u64(dotted, v));
    else if (key == "stride_bytes") a.stride_bytes = parse_u64(dotted, v);
    else if (key == "challenges") set_challenges(a, v);
    else if (key == "noise_instr_count") a.noise_instr_count = static_cast<uint32_t>(parse_u64(dotted, v));
    else if (key == "noise_offset") a.noise_offset = parse_u64(dotted, v);
    else if (key == "seed") a.seed = parse_u64(dotted, v);
    else if (key == "trials") a.trials = static_cast<uint32_t>(parse_u64(dotted, v));
    else if (key == "secret_domain") {
      std::string s = trim(v);
      if (s == "any") a.secret_domain = SecretDomain::ANY;
      else if (s == "in_page") a.secret_domain = SecretDomain::IN_PAGE;
      else throw ConfigError("attack.secret_domain must be any|in_page");
    } else throw ConfigError("unknown key " + dotted);
  } else if (sec == "workload") {
    WorkloadSpec& w = cfg.workload;
    if (key == "kind") w.kind = parse_workload_kind(v);
    else if (key == "length") w.length = parse_u64(dotted, v);
    else if (key == "stride_bytes") w.stride_bytes = parse_u64(dotted, v);
    else if (key == "seed") w.seed = parse_u64(dotted, v);
    else throw ConfigError("unknown key " + dotted);
  } else {
    throw ConfigError("unknown section [" + sec + "]");
  }
}

SimConfig parse_config(const std::string& text) {
  SimConfig cfg;
  std::string section;
  size_t line_no = 0;
  std::stringstream ss(text);
  std::string raw;
  while (std::getline(ss, raw)) {
    ++line_no;
    std::string line = raw;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (section.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": key outside any section");
    apply_config_key(cfg, section + "." + key, value);
  }

  if (const char* env = std::getenv("PREFENDER_SEED")) {
    uint64_t s = parse_u64("PREFENDER_SEED", env);
    cfg.attack.seed = s;
    cfg.workload.seed = s;
  }
  return cfg;
}

SimConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace prefender
