#include "txtrace/chain.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "txtrace/errors.hpp"
#include "txtrace/util.hpp"

namespace txtrace {

using nlohmann::ordered_json;

std::optional<AddrType> addr_type_from_string(const std::string& s) {
    if (s == "pubkeyhash") return AddrType::pubkeyhash;
    if (s == "scripthash") return AddrType::scripthash;
    if (s == "multisig") return AddrType::multisig;
    if (s == "segwit") return AddrType::segwit;
    if (s == "other") return AddrType::other;
    return std::nullopt;
}

const char* to_string(AddrType t) {
    switch (t) {
        case AddrType::pubkeyhash: return "pubkeyhash";
        case AddrType::scripthash: return "scripthash";
        case AddrType::multisig: return "multisig";
        case AddrType::segwit: return "segwit";
        default: return "other";
    }
}

uint64_t Transaction::input_value() const {
    uint64_t v = 0;
    for (const auto& s : inputs) v += s.value;
    return v;
}

uint64_t Transaction::output_value() const {
    uint64_t v = 0;
    for (const auto& s : outputs) v += s.value;
    return v;
}

uint64_t tx_fee(const Transaction& tx) {
    if (tx.coinbase) return 0;
    uint64_t in = tx.input_value();
    uint64_t out = tx.output_value();
    if (out > in) throw NegativeFee(tx.txid);
    return in - out;
}

std::optional<uint32_t> ChainStore::tx_index(const std::string& txid) const {
    auto it = txid_index_.find(txid);
    if (it == txid_index_.end()) return std::nullopt;
    return it->second;
}

bool ChainStore::has_address(const std::string& address) const {
    return records_.count(address) != 0;
}

const AddressRecord* ChainStore::find(const std::string& address) const {
    auto it = records_.find(address);
    return it == records_.end() ? nullptr : &it->second;
}

AddressRecord ChainStore::context(const std::string& address) const {
    if (const AddressRecord* rec = find(address)) return *rec;
    AddressRecord empty;
    empty.address = address;
    return empty;
}

namespace {

TxSlot parse_slot(const ordered_json& j, bool is_output, std::size_t line_no) {
    if (!j.is_object()) throw MalformedLine(line_no, "slot is not an object");
    TxSlot slot;
    bool has_addr = j.contains("addr");
    bool has_data = j.contains("data");
    if (has_addr == has_data)
        throw MalformedLine(line_no, "slot must carry exactly one of addr/data");
    if (has_data && !is_output)
        throw MalformedLine(line_no, "data slots are only valid on outputs");
    if (has_addr) {
        if (!j["addr"].is_string() || j["addr"].get<std::string>().empty())
            throw MalformedLine(line_no, "slot addr must be a non-empty string");
        slot.address = j["addr"].get<std::string>();
    } else {
        if (!j["data"].is_string())
            throw MalformedLine(line_no, "slot data must be a hex string");
        std::string payload = j["data"].get<std::string>();
        if (!is_hex_string(payload))
            throw MalformedLine(line_no, "slot data must be lowercase hex");
        slot.data = payload;
    }
    if (!j.contains("value") || !j["value"].is_number_unsigned())
        throw MalformedLine(line_no, "slot value must be a non-negative integer");
    slot.value = j["value"].get<uint64_t>();
    return slot;
}

Transaction parse_tx_line(const std::string& line, std::size_t line_no,
                          std::unordered_map<std::string, AddrType>& declared_types,
                          std::unordered_map<std::string, uint32_t>& declared_equiv) {
    ordered_json j;
    try {
        j = ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw MalformedLine(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw MalformedLine(line_no, "transaction is not an object");

    Transaction tx;
    if (!j.contains("txid") || !j["txid"].is_string())
        throw MalformedLine(line_no, "missing txid");
    tx.txid = j["txid"].get<std::string>();
    if (tx.txid.size() != 64 || !is_hex_string(tx.txid))
        throw MalformedLine(line_no, "txid must be 64 lowercase hex chars");

    if (!j.contains("height") || !j["height"].is_number_unsigned())
        throw MalformedLine(line_no, "height must be a non-negative integer");
    tx.height = j["height"].get<uint32_t>();

    if (!j.contains("time") || !j["time"].is_number_integer())
        throw MalformedLine(line_no, "time must be an integer");
    tx.timestamp = j["time"].get<int64_t>();

    if (!j.contains("coinbase") || !j["coinbase"].is_boolean())
        throw MalformedLine(line_no, "coinbase must be a boolean");
    tx.coinbase = j["coinbase"].get<bool>();

    if (!j.contains("in") || !j["in"].is_array())
        throw MalformedLine(line_no, "in must be an array");
    for (const auto& s : j["in"]) tx.inputs.push_back(parse_slot(s, false, line_no));

    if (!j.contains("out") || !j["out"].is_array())
        throw MalformedLine(line_no, "out must be an array");
    for (std::size_t i = 0; i < j["out"].size(); ++i)
        tx.outputs.push_back(parse_slot(j["out"][i], true, line_no));

    if (tx.coinbase != tx.inputs.empty())
        throw MalformedLine(line_no, "coinbase flag must match empty input list");
    if (!tx.coinbase && tx.output_value() > tx.input_value())
        throw MalformedLine(line_no, "outputs exceed inputs");

    if (j.contains("size")) {
        if (!j["size"].is_number_unsigned())
            throw MalformedLine(line_no, "size must be a non-negative integer");
        tx.size = j["size"].get<uint32_t>();
    }
    if (j.contains("weight")) {
        if (!j["weight"].is_number_unsigned())
            throw MalformedLine(line_no, "weight must be a non-negative integer");
        tx.weight = j["weight"].get<uint32_t>();
    }

    if (j.contains("addr_types")) {
        if (!j["addr_types"].is_object())
            throw MalformedLine(line_no, "addr_types must be an object");
        for (auto it = j["addr_types"].begin(); it != j["addr_types"].end(); ++it) {
            auto t = addr_type_from_string(it.value().get<std::string>());
            if (!t) throw MalformedLine(line_no, "unknown addr type " + it.value().dump());
            auto [pos, inserted] = declared_types.emplace(it.key(), *t);
            if (!inserted && pos->second != *t)
                throw MalformedLine(line_no, "conflicting addr_type for " + it.key());
        }
    }
    if (j.contains("equiv")) {
        if (!j["equiv"].is_object())
            throw MalformedLine(line_no, "equiv must be an object");
        for (auto it = j["equiv"].begin(); it != j["equiv"].end(); ++it) {
            if (!it.value().is_number_unsigned())
                throw MalformedLine(line_no, "equiv counts must be non-negative");
            uint32_t n = it.value().get<uint32_t>();
            auto [pos, inserted] = declared_equiv.emplace(it.key(), n);
            if (!inserted && pos->second != n)
                throw MalformedLine(line_no, "conflicting equiv count for " + it.key());
        }
    }
    return tx;
}

void append_unique(std::vector<uint32_t>& v, uint32_t idx) {
    if (v.empty() || v.back() != idx) v.push_back(idx);
}

}  // namespace

ChainStore ingest_chain_text(const std::string& text, const IngestOptions& options) {
    ChainStore store;
    std::unordered_map<std::string, AddrType> declared_types;
    std::unordered_map<std::string, uint32_t> declared_equiv;

    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        store.txs_.push_back(parse_tx_line(line, line_no, declared_types, declared_equiv));
    }

    // Chronological order: height, then file order within a block.
    std::stable_sort(store.txs_.begin(), store.txs_.end(),
                     [](const Transaction& a, const Transaction& b) {
                         return a.height < b.height;
                     });

    int64_t prev_ts = INT64_MIN;
    for (uint32_t i = 0; i < store.txs_.size(); ++i) {
        const Transaction& tx = store.txs_[i];
        if (!store.txid_index_.emplace(tx.txid, i).second) throw DuplicateTxid(tx.txid);
        if (options.strict_timestamps) {
            if (tx.timestamp < prev_ts) throw NonMonotonicTimestamp(tx.txid);
            prev_ts = tx.timestamp;
        }
        for (const auto& slot : tx.inputs) {
            auto& rec = store.records_[slot.address];
            rec.address = slot.address;
            append_unique(rec.withdrawal_txs, i);
        }
        for (const auto& slot : tx.outputs) {
            if (slot.is_data()) continue;
            auto& rec = store.records_[slot.address];
            rec.address = slot.address;
            append_unique(rec.deposit_txs, i);
        }
    }

    for (auto& [addr, rec] : store.records_) {
        auto t = declared_types.find(addr);
        if (t != declared_types.end()) rec.type = t->second;
        auto e = declared_equiv.find(addr);
        if (e != declared_equiv.end()) rec.equiv_count = e->second;
        store.sorted_addresses_.push_back(addr);
    }
    std::sort(store.sorted_addresses_.begin(), store.sorted_addresses_.end());
    return store;
}

ChainStore ingest_chain(const std::string& path, const IngestOptions& options) {
    return ingest_chain_text(read_file(path), options);
}

std::string ChainStore::export_jsonl() const {
    std::string out;
    // addr_types/equiv metadata is re-declared on the first tx touching the
    // address, keeping every line self-contained enough for round-trips.
    std::unordered_map<std::string, bool> meta_emitted;
    for (const auto& tx : txs_) {
        ordered_json j;
        j["txid"] = tx.txid;
        j["height"] = tx.height;
        j["time"] = tx.timestamp;
        j["coinbase"] = tx.coinbase;
        j["in"] = ordered_json::array();
        for (const auto& s : tx.inputs) {
            ordered_json slot;
            slot["addr"] = s.address;
            slot["value"] = s.value;
            j["in"].push_back(slot);
        }
        j["out"] = ordered_json::array();
        for (const auto& s : tx.outputs) {
            ordered_json slot;
            if (s.is_data())
                slot["data"] = *s.data;
            else
                slot["addr"] = s.address;
            slot["value"] = s.value;
            j["out"].push_back(slot);
        }
        if (tx.size) j["size"] = tx.size;
        if (tx.weight) j["weight"] = tx.weight;

        ordered_json types = ordered_json::object();
        ordered_json equiv = ordered_json::object();
        auto consider = [&](const std::string& addr) {
            if (meta_emitted.count(addr)) return;
            meta_emitted[addr] = true;
            const auto& rec = records_.at(addr);
            if (rec.type != AddrType::other) types[addr] = to_string(rec.type);
            if (rec.equiv_count) equiv[addr] = rec.equiv_count;
        };
        for (const auto& s : tx.inputs) consider(s.address);
        for (const auto& s : tx.outputs)
            if (!s.is_data()) consider(s.address);
        if (!types.empty()) j["addr_types"] = types;
        if (!equiv.empty()) j["equiv"] = equiv;

        out += j.dump();
        out += '\n';
    }
    return out;
}

}  // namespace txtrace
