#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace txtrace {

// Desk-scale synthetic chain with planted ground truth. Exchange-like
// services produce high-volume many-slot transactions, users low-volume
// ones, so the synthetic exchange-classification task is learnable.
struct SynthSpec {
    uint64_t rng_seed = 1;

    std::size_t users = 200;
    std::size_t exchanges = 2;
    std::size_t exchange_addresses = 20;  // per exchange
    std::size_t background_txes = 1000;
    int64_t start_time = 1500000000;
    int64_t block_interval = 600;

    // Planted structures; counts are planted signaling addresses.
    std::size_t cerber_addresses = 0;
    std::size_t cycles_per_cerber = 3;
    std::size_t pony_addresses = 0;
    std::size_t pairs_per_pony = 3;
    std::size_t glupteba_addresses = 0;
    std::size_t payloads_per_glupteba = 2;
    std::string glupteba_key_hex;  // 64 hex chars; derived from rng_seed when empty

    std::size_t dust_txes = 0;
    std::size_t dust_outputs = 100;
    std::size_t near_dust_txes = 0;  // 99 equal outputs, retained by the filter
    std::size_t coinjoin_txes = 0;

    // Campaign seeds with planted relation paths to tagged entities.
    std::size_t relation_seeds = 0;
    std::size_t relations_per_seed = 0;
    std::size_t relation_hops = 2;      // untagged intermediates per path
    bool relation_backward_paths = false;

    // Untagged exchange-like hubs one hop from the seeds, hiding foreign
    // tagged entities behind them; used by the ablation and epsilon studies.
    std::size_t hubs = 0;
    std::size_t hub_fanout = 50;        // one-off counterparties per payout
    std::size_t hub_payouts = 4;
    std::size_t foreign_tags_per_hub = 0;

    bool two_seed_example = false;  // embed the hand-encoded two-seed worked example

    static SynthSpec from_json(const std::string& text);
    std::string to_json() const;
};

struct SynthResult {
    std::string chain_jsonl;
    std::string manifest_json;
    std::string tags_csv;
    std::string seeds_txt;
};

SynthResult generate_chain(const SynthSpec& spec);

}  // namespace txtrace
