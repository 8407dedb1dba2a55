#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "txtrace/chain.hpp"

namespace txtrace {

struct OracleEvidence {
    std::string payload;  // decoded domain (Cerber/Glupteba) or dotted IP (Pony)
    std::string txid;     // round-trip or OP_RETURN tx; Pony: second tx of the pair
    std::string txid2;    // Cerber: return tx; Pony: first tx of the pair
    int64_t timestamp = 0;
};

struct OracleResult {
    bool is_signaling = false;
    std::vector<OracleEvidence> evidence;
    // Pony only: 2*|ips| / |deposit txes|. Evidence may be non-empty even
    // when the ratio stays below the 0.5 gate.
    std::optional<double> ratio;
    // Glupteba only: authenticated decrypts suppressed by the hostname
    // guard; nonzero only outside strict mode.
    std::size_t suppressed_non_hostname = 0;
};

struct IPv4 {
    uint8_t a = 0, b = 0, c = 0, d = 0;
    std::string str() const;
};

struct PonyCodecParams {
    // "low16-be": each value contributes its low 16 bits, big-endian.
    std::string codec = "low16-be";
    double ratio_threshold = 0.5;
    int64_t pair_window_seconds = 3600;
};

IPv4 decode_ip(uint64_t v1, uint64_t v2, const PonyCodecParams& codec = {});
bool is_public(const IPv4& ip);

struct GluptebaParams {
    std::vector<std::vector<uint8_t>> keys;  // 32-byte AES-GCM-256 keys
    // Strict mode counts any authenticated decryption; default additionally
    // requires hostname-shaped plaintext.
    bool strict = false;
};

OracleResult cerber_oracle(const ChainStore& store, const std::string& address);
OracleResult pony_oracle(const ChainStore& store, const std::string& address,
                         const PonyCodecParams& codec = {});
OracleResult glupteba_oracle(const ChainStore& store, const std::string& address,
                             const GluptebaParams& params);

// Family-name dispatch; skidmap reuses the Pony oracle.
struct OracleRegistry {
    std::map<std::string, std::function<OracleResult(const ChainStore&, const std::string&)>>
        oracles;

    // family plus optional JSON parameter file ("keys", "codec", "strict", ...).
    void register_family(const std::string& family, const std::string& params_path);
    bool empty() const { return oracles.empty(); }
};

}  // namespace txtrace
