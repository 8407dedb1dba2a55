#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace txtrace {

enum class AddrType { pubkeyhash = 0, scripthash = 1, multisig = 2, segwit = 3, other = 4 };

std::optional<AddrType> addr_type_from_string(const std::string& s);
const char* to_string(AddrType t);

// One input or output slot. Exactly one of {address, data} is set; data
// slots model OP_RETURN outputs and never appear in the address index.
struct TxSlot {
    std::string address;
    std::optional<std::string> data;  // lowercase hex payload, outputs only
    uint64_t value = 0;               // satoshis
    bool is_data() const { return data.has_value(); }
};

struct Transaction {
    std::string txid;  // 64-char lowercase hex
    uint32_t height = 0;
    int64_t timestamp = 0;  // Unix seconds, UTC
    bool coinbase = false;
    std::vector<TxSlot> inputs;
    std::vector<TxSlot> outputs;
    uint32_t size = 0;    // optional interchange metadata, 0 when absent
    uint32_t weight = 0;

    uint64_t input_value() const;
    uint64_t output_value() const;
    std::size_t slot_count() const { return inputs.size() + outputs.size(); }
};

struct AddressRecord {
    std::string address;
    // Indexes into ChainStore::txs(), chronological, duplicate-free.
    std::vector<uint32_t> deposit_txs;
    std::vector<uint32_t> withdrawal_txs;
    AddrType type = AddrType::other;
    uint32_t equiv_count = 0;
};

struct IngestOptions {
    bool strict_timestamps = false;
};

// Immutable after ingestion; concurrent readers need no coordination.
class ChainStore {
public:
    const std::vector<Transaction>& txs() const { return txs_; }
    const Transaction& tx(uint32_t idx) const { return txs_[idx]; }
    std::optional<uint32_t> tx_index(const std::string& txid) const;

    // Deposit/withdrawal lists plus the address record. Unknown addresses
    // yield a synthesized record with zero activity, not an error.
    AddressRecord context(const std::string& address) const;
    // Index-backed lookup; nullptr when the address never appears on chain.
    const AddressRecord* find(const std::string& address) const;
    bool has_address(const std::string& address) const;

    // Addresses in lexicographic order, for deterministic exports.
    const std::vector<std::string>& sorted_addresses() const { return sorted_addresses_; }
    std::size_t address_count() const { return records_.size(); }

    // Canonical JSON Lines serialization: txs sorted by (height, input
    // order), fixed key order. Re-ingesting the output reproduces the store.
    std::string export_jsonl() const;

private:
    friend ChainStore ingest_chain(const std::string&, const IngestOptions&);
    friend ChainStore ingest_chain_text(const std::string&, const IngestOptions&);

    std::vector<Transaction> txs_;  // sorted by (height, file order)
    std::unordered_map<std::string, uint32_t> txid_index_;
    std::unordered_map<std::string, AddressRecord> records_;
    std::vector<std::string> sorted_addresses_;
};

ChainStore ingest_chain(const std::string& path, const IngestOptions& options = {});
ChainStore ingest_chain_text(const std::string& text, const IngestOptions& options = {});

// sum(inputs) - sum(outputs); 0 for coinbase. Throws NegativeFee on
// malformed in-memory data (ingest already rejects such lines).
uint64_t tx_fee(const Transaction& tx);

}  // namespace txtrace
