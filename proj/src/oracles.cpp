#include "txtrace/oracles.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>

#include "txtrace/crypto.hpp"
#include "txtrace/errors.hpp"
#include "txtrace/util.hpp"

namespace txtrace {

std::string IPv4::str() const {
    return std::to_string(a) + "." + std::to_string(b) + "." + std::to_string(c) + "." +
           std::to_string(d);
}

IPv4 decode_ip(uint64_t v1, uint64_t v2, const PonyCodecParams& codec) {
    // Values at or above 2^16 contribute only their low 16 bits.
    (void)codec;  // single built-in codec; the struct keeps it swappable
    uint64_t w1 = v1 & 0xffff;
    uint64_t w2 = v2 & 0xffff;
    IPv4 ip;
    ip.a = static_cast<uint8_t>(w1 >> 8);
    ip.b = static_cast<uint8_t>(w1 & 0xff);
    ip.c = static_cast<uint8_t>(w2 >> 8);
    ip.d = static_cast<uint8_t>(w2 & 0xff);
    return ip;
}

bool is_public(const IPv4& ip) {
    if (ip.a == 0) return false;                                  // 0.0.0.0/8
    if (ip.a == 10) return false;                                 // 10/8
    if (ip.a == 100 && (ip.b & 0xc0) == 64) return false;         // 100.64/10
    if (ip.a == 127) return false;                                // 127/8
    if (ip.a == 169 && ip.b == 254) return false;                 // 169.254/16
    if (ip.a == 172 && (ip.b & 0xf0) == 16) return false;         // 172.16/12
    if (ip.a == 192 && ip.b == 168) return false;                 // 192.168/16
    if ((ip.a & 0xf0) == 224) return false;                       // 224/4 multicast
    if ((ip.a & 0xf0) == 240) return false;                       // 240/4 reserved
    return true;
}

OracleResult cerber_oracle(const ChainStore& store, const std::string& address) {
    OracleResult result;
    const AddressRecord* rec = store.find(address);
    if (!rec) return result;

    for (uint32_t wi : rec->withdrawal_txs) {
        const Transaction& tx = store.tx(wi);
        if (tx.inputs.size() != 1 || tx.outputs.size() != 1) continue;
        if (tx.outputs[0].is_data()) continue;
        const std::string& temp_addr = tx.outputs[0].address;
        const AddressRecord* temp = store.find(temp_addr);
        if (!temp) continue;
        if (temp->withdrawal_txs.size() != 1 || temp->deposit_txs.size() != 1) continue;
        const Transaction& tx_r = store.tx(temp->withdrawal_txs[0]);
        if (tx_r.inputs.size() != 1 || tx_r.outputs.size() != 1) continue;
        if (tx_r.outputs[0].is_data() || tx_r.outputs[0].address != address) continue;
        // The temporary address returns exactly what it received: the sent
        // amount equals the return value plus the return fee.
        uint64_t return_value = tx_fee(tx_r) + tx_r.output_value();
        if (tx.output_value() != return_value) continue;
        result.is_signaling = true;
        // The first six characters of the temporary address encode the
        // signaled DNS label.
        result.evidence.push_back(
            {temp_addr.substr(0, 6), tx.txid, tx_r.txid, tx.timestamp});
    }
    return result;
}

OracleResult pony_oracle(const ChainStore& store, const std::string& address,
                         const PonyCodecParams& codec) {
    OracleResult result;
    result.ratio = 0.0;
    const AddressRecord* rec = store.find(address);
    if (!rec || rec->deposit_txs.empty()) return result;

    std::vector<uint32_t> all;
    std::set_union(rec->deposit_txs.begin(), rec->deposit_txs.end(),
                   rec->withdrawal_txs.begin(), rec->withdrawal_txs.end(),
                   std::back_inserter(all));
    std::vector<bool> is_deposit_tx(all.size());
    {
        std::size_t di = 0;
        for (std::size_t i = 0; i < all.size(); ++i) {
            while (di < rec->deposit_txs.size() && rec->deposit_txs[di] < all[i]) ++di;
            is_deposit_tx[i] = di < rec->deposit_txs.size() && rec->deposit_txs[di] == all[i];
        }
    }

    auto value_to_address = [&](const Transaction& tx) {
        uint64_t v = 0;
        for (const auto& s : tx.outputs)
            if (!s.is_data() && s.address == address) v += s.value;
        return v;
    };

    // Consecutive-deposit pair scan; any withdrawal or failed shape check
    // resets the pending first transaction.
    const Transaction* tx1 = nullptr;
    uint64_t tx1_value = 0;
    for (std::size_t i = 0; i < all.size(); ++i) {
        const Transaction& tx = store.tx(all[i]);
        if (!is_deposit_tx[i]) {
            tx1 = nullptr;
            continue;
        }
        if (tx.inputs.size() > 3 || tx.outputs.size() > 2) {
            tx1 = nullptr;
            continue;
        }
        uint64_t value = value_to_address(tx);
        if (tx1) {
            int64_t delta = tx.timestamp - tx1->timestamp;
            if (delta <= codec.pair_window_seconds) {
                IPv4 ip = decode_ip(tx1_value, value, codec);
                if (is_public(ip))
                    result.evidence.push_back({ip.str(), tx.txid, tx1->txid, tx.timestamp});
            }
            tx1 = nullptr;
        } else {
            tx1 = &tx;
            tx1_value = value;
        }
    }

    double ratio = 2.0 * static_cast<double>(result.evidence.size()) /
                   static_cast<double>(rec->deposit_txs.size());
    result.ratio = ratio;
    result.is_signaling = ratio >= codec.ratio_threshold;
    return result;
}

namespace {

bool hostname_shaped(const std::vector<uint8_t>& plain) {
    if (plain.empty()) return false;
    bool has_dot = false;
    for (uint8_t c : plain) {
        if (c == '.')
            has_dot = true;
        else if (!std::isalnum(c) && c != '-' && c != '_')
            return false;
    }
    return has_dot;
}

}  // namespace

OracleResult glupteba_oracle(const ChainStore& store, const std::string& address,
                             const GluptebaParams& params) {
    OracleResult result;
    const AddressRecord* rec = store.find(address);
    if (!rec) return result;

    for (uint32_t wi : rec->withdrawal_txs) {
        const Transaction& tx = store.tx(wi);
        for (const auto& out : tx.outputs) {
            if (!out.is_data()) continue;
            const std::string& data = *out.data;
            if (data.size() < 56) continue;  // 28 bytes minimum
            std::vector<uint8_t> raw;
            try {
                raw = hex_decode(data);
            } catch (const MalformedHex&) {
                continue;  // non-match, not a crash
            }
            std::vector<uint8_t> iv(raw.begin(), raw.begin() + 12);
            std::vector<uint8_t> tag(raw.end() - 16, raw.end());
            std::vector<uint8_t> cipher(raw.begin() + 12, raw.end() - 16);
            for (const auto& key : params.keys) {
                auto plain = aes_gcm_decrypt(iv, cipher, tag, key);
                if (!plain) continue;
                if (!params.strict && !hostname_shaped(*plain)) {
                    ++result.suppressed_non_hostname;
                    continue;
                }
                result.is_signaling = true;
                result.evidence.push_back(
                    {std::string(plain->begin(), plain->end()), tx.txid, "", tx.timestamp});
                break;
            }
        }
    }
    return result;
}

void OracleRegistry::register_family(const std::string& family,
                                     const std::string& params_path) {
    PonyCodecParams pony_params;
    GluptebaParams glupteba_params;
    if (!params_path.empty()) {
        nlohmann::json j = nlohmann::json::parse(read_file(params_path));
        if (j.contains("codec")) {
            pony_params.codec = j["codec"].get<std::string>();
            if (pony_params.codec != "low16-be")
                throw Error("unknown pony codec '" + pony_params.codec + "'");
        }
        if (j.contains("ratio_threshold"))
            pony_params.ratio_threshold = j["ratio_threshold"].get<double>();
        if (j.contains("pair_window_seconds"))
            pony_params.pair_window_seconds = j["pair_window_seconds"].get<int64_t>();
        if (j.contains("keys"))
            for (const auto& k : j["keys"]) {
                auto key = hex_decode(k.get<std::string>());
                if (key.size() != 32) throw Error("glupteba keys must be 32 bytes");
                glupteba_params.keys.push_back(key);
            }
        if (j.contains("strict")) glupteba_params.strict = j["strict"].get<bool>();
    }

    if (family == "cerber") {
        oracles[family] = [](const ChainStore& s, const std::string& a) {
            return cerber_oracle(s, a);
        };
    } else if (family == "pony" || family == "skidmap") {
        oracles[family] = [pony_params](const ChainStore& s, const std::string& a) {
            return pony_oracle(s, a, pony_params);
        };
    } else if (family == "glupteba") {
        if (glupteba_params.keys.empty())
            throw Error("glupteba oracle requires at least one key");
        oracles[family] = [glupteba_params](const ChainStore& s, const std::string& a) {
            return glupteba_oracle(s, a, glupteba_params);
        };
    } else {
        throw Error("unknown oracle family '" + family + "'");
    }
}

}  // namespace txtrace
