#include "txtrace/synth.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <set>

#include "txtrace/crypto.hpp"
#include "txtrace/errors.hpp"
#include "txtrace/oracles.hpp"
#include "txtrace/rng.hpp"
#include "txtrace/tags.hpp"
#include "txtrace/util.hpp"

namespace txtrace {

using nlohmann::ordered_json;

SynthSpec SynthSpec::from_json(const std::string& text) {
    ordered_json j = ordered_json::parse(text);
    SynthSpec s;
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j[key].get<std::decay_t<decltype(field)>>();
    };
    get("rng_seed", s.rng_seed);
    get("users", s.users);
    get("exchanges", s.exchanges);
    get("exchange_addresses", s.exchange_addresses);
    get("background_txes", s.background_txes);
    get("start_time", s.start_time);
    get("block_interval", s.block_interval);
    get("cerber_addresses", s.cerber_addresses);
    get("cycles_per_cerber", s.cycles_per_cerber);
    get("pony_addresses", s.pony_addresses);
    get("pairs_per_pony", s.pairs_per_pony);
    get("glupteba_addresses", s.glupteba_addresses);
    get("payloads_per_glupteba", s.payloads_per_glupteba);
    get("glupteba_key_hex", s.glupteba_key_hex);
    get("dust_txes", s.dust_txes);
    get("dust_outputs", s.dust_outputs);
    get("near_dust_txes", s.near_dust_txes);
    get("coinjoin_txes", s.coinjoin_txes);
    get("relation_seeds", s.relation_seeds);
    get("relations_per_seed", s.relations_per_seed);
    get("relation_hops", s.relation_hops);
    get("relation_backward_paths", s.relation_backward_paths);
    get("hubs", s.hubs);
    get("hub_fanout", s.hub_fanout);
    get("hub_payouts", s.hub_payouts);
    get("foreign_tags_per_hub", s.foreign_tags_per_hub);
    get("two_seed_example", s.two_seed_example);
    return s;
}

std::string SynthSpec::to_json() const {
    ordered_json j;
    j["rng_seed"] = rng_seed;
    j["users"] = users;
    j["exchanges"] = exchanges;
    j["exchange_addresses"] = exchange_addresses;
    j["background_txes"] = background_txes;
    j["start_time"] = start_time;
    j["block_interval"] = block_interval;
    j["cerber_addresses"] = cerber_addresses;
    j["cycles_per_cerber"] = cycles_per_cerber;
    j["pony_addresses"] = pony_addresses;
    j["pairs_per_pony"] = pairs_per_pony;
    j["glupteba_addresses"] = glupteba_addresses;
    j["payloads_per_glupteba"] = payloads_per_glupteba;
    j["glupteba_key_hex"] = glupteba_key_hex;
    j["dust_txes"] = dust_txes;
    j["dust_outputs"] = dust_outputs;
    j["near_dust_txes"] = near_dust_txes;
    j["coinjoin_txes"] = coinjoin_txes;
    j["relation_seeds"] = relation_seeds;
    j["relations_per_seed"] = relations_per_seed;
    j["relation_hops"] = relation_hops;
    j["relation_backward_paths"] = relation_backward_paths;
    j["hubs"] = hubs;
    j["hub_fanout"] = hub_fanout;
    j["hub_payouts"] = hub_payouts;
    j["foreign_tags_per_hub"] = foreign_tags_per_hub;
    j["two_seed_example"] = two_seed_example;
    return j.dump(2) + "\n";
}

namespace {

constexpr uint64_t kCoin = 100000000;  // 1 BTC
constexpr uint64_t kStdFee = 100000;   // the 0.001 BTC fee of the Cerber rounds

struct Slot {
    std::string addr;
    uint64_t value;
};

struct Builder {
    const SynthSpec& spec;
    Rng rng;
    std::string chain;
    uint32_t height = 100;
    std::size_t txes_in_block = 0;
    uint64_t tx_counter = 0;
    uint64_t addr_counter = 0;
    std::map<std::string, uint64_t> balance;

    // ground truth
    std::vector<std::string> user_addrs, exchange_addrs, hub_addrs, seeds;
    std::vector<std::string> cerber, pony, glupteba;
    std::vector<std::string> dust_txids, near_dust_txids, coinjoin_txids;
    std::vector<ordered_json> planted_relations;
    std::vector<std::pair<std::string, std::string>> tag_rows;  // address, "category:label"

    explicit Builder(const SynthSpec& s) : spec(s), rng(s.rng_seed) {}

    int64_t now() const {
        return spec.start_time + static_cast<int64_t>(height - 100) * spec.block_interval;
    }

    void next_block() {
        ++height;
        txes_in_block = 0;
    }

    void skip_blocks(uint32_t n) {
        height += n;
        txes_in_block = 0;
    }

    std::string new_txid() {
        return sha256_hex("synthtx:" + std::to_string(spec.rng_seed) + ":" +
                          std::to_string(tx_counter++));
    }

    std::string new_addr(const char* role) {
        static const char* alphabet = "123456789abcdefghijkmnopqrstuvwxyz";
        std::string a = "1";
        a += role;
        a += std::to_string(addr_counter++);
        for (int i = 0; i < 8; ++i) a += alphabet[rng.below(34)];
        return a;
    }

    std::string emit(const std::vector<Slot>& ins, const std::vector<Slot>& outs,
                     const std::vector<std::string>& data_payloads = {}) {
        ordered_json j;
        std::string txid = new_txid();
        j["txid"] = txid;
        j["height"] = height;
        j["time"] = now();
        j["coinbase"] = ins.empty();
        j["in"] = ordered_json::array();
        for (const auto& s : ins) {
            j["in"].push_back({{"addr", s.addr}, {"value", s.value}});
            auto it = balance.find(s.addr);
            if (it != balance.end()) it->second -= std::min(it->second, s.value);
        }
        j["out"] = ordered_json::array();
        for (const auto& s : outs) {
            j["out"].push_back({{"addr", s.addr}, {"value", s.value}});
            balance[s.addr] += s.value;
        }
        for (const auto& d : data_payloads)
            j["out"].push_back({{"data", d}, {"value", 0}});
        chain += j.dump();
        chain += '\n';
        if (++txes_in_block >= 3) next_block();
        return txid;
    }

    void grant(const std::string& addr, uint64_t amount) {
        emit({}, {{addr, amount}});
    }

    // The two-seed worked example, byte-stable: fixed ids, heights, values.
    void emit_two_seed_example() {
        struct F {
            const char* id;
            uint32_t h;
            std::vector<Slot> ins, outs;
        };
        const std::vector<F> txes = {
            {"f01", 100, {}, {{"f", 5000000000}}},
            {"f02", 101, {{"f", 5000000000}}, {{"e", 4999900000}}},
            {"f03", 102, {{"e", 1999900000}}, {{"S2", 1999800000}}},
            {"f04", 103, {{"e", 3000000000}}, {{"d", 2000000000}, {"i", 999900000}}},
            {"f05", 104, {{"d", 500000000}}, {{"S1", 499900000}}},
            {"f06", 105, {{"S1", 499900000}}, {{"a", 499800000}}},
            {"f07", 106, {{"a", 499800000}, {"d", 1500000000}}, {{"h", 1999700000}}},
            {"f08", 107, {{"S2", 999800000}}, {{"h", 999700000}}},
            {"f09", 108, {{"S2", 1000000000}}, {{"c", 999900000}}},
            {"f10", 109, {{"h", 2999400000}}, {{"b", 2999300000}}},
            {"f11", 110, {{"b", 2999300000}, {"c", 999900000}}, {{"b", 3999100000}}},
        };
        for (const auto& t : txes) {
            ordered_json j;
            std::string txid(64 - std::string(t.id).size(), '0');
            txid += t.id;
            j["txid"] = txid;
            j["height"] = height + t.h - 100;
            j["time"] = spec.start_time +
                        static_cast<int64_t>(height + t.h - 200) * spec.block_interval;
            j["coinbase"] = t.ins.empty();
            j["in"] = ordered_json::array();
            for (const auto& s : t.ins) j["in"].push_back({{"addr", s.addr}, {"value", s.value}});
            j["out"] = ordered_json::array();
            for (const auto& s : t.outs)
                j["out"].push_back({{"addr", s.addr}, {"value", s.value}});
            chain += j.dump();
            chain += '\n';
        }
        height += 11;
        tag_rows.emplace_back("c", "exchange:poloniex");
        seeds.push_back("S1");
        seeds.push_back("S2");
    }

    void build_background() {
        for (std::size_t u = 0; u < spec.users; ++u) user_addrs.push_back(new_addr("u"));
        for (std::size_t e = 0; e < spec.exchanges; ++e)
            for (std::size_t a = 0; a < spec.exchange_addresses; ++a)
                exchange_addrs.push_back(new_addr("x"));
        if (exchange_addrs.empty() && (spec.users || spec.background_txes))
            exchange_addrs.push_back(new_addr("x"));

        for (const auto& x : exchange_addrs) grant(x, 10000 * kCoin);
        next_block();

        // Per-user funding withdrawals (one tx each) give every exchange
        // address a steady transaction count; users stay low-volume.
        std::size_t per_exchange = spec.exchanges ? exchange_addrs.size() / spec.exchanges
                                                  : exchange_addrs.size();
        auto exchange_of = [&](std::size_t global_idx) {
            return per_exchange ? global_idx / per_exchange : 0;
        };
        for (const auto& user : user_addrs) {
            std::size_t xi = rng.below(exchange_addrs.size());
            uint64_t v = kCoin / 2 + rng.below(15 * kCoin);
            emit({{exchange_addrs[xi], v + 40 * kCoin + kStdFee}},
                 {{user, v}, {exchange_addrs[xi], 40 * kCoin}});
            if (txes_in_block >= 3) next_block();
        }
        next_block();

        // A slice of users are one-shot pass-throughs: they forward their
        // whole balance right away. Short-lived single-use addresses are
        // common on chain and must sit in the negative class, otherwise any
        // high-rate address looks like an exchange to the classifier.
        for (std::size_t u = 0; u + 1 < user_addrs.size(); u += 4) {
            uint64_t bal = balance[user_addrs[u]];
            if (bal < 2 * kStdFee) continue;
            emit({{user_addrs[u], bal}}, {{user_addrs[u + 1], bal - kStdFee}});
            if (rng.chance(0.3)) skip_blocks(1 + static_cast<uint32_t>(rng.below(200)));
        }
        next_block();

        for (std::size_t i = 0; i < spec.background_txes; ++i) {
            switch (rng.below(10)) {
                case 0:
                case 1:
                case 2: {  // user -> user payment
                    if (user_addrs.size() < 2) break;
                    const std::string& from = user_addrs[rng.below(user_addrs.size())];
                    const std::string& to = user_addrs[rng.below(user_addrs.size())];
                    uint64_t bal = balance[from];
                    if (from == to || bal < 200000) break;
                    uint64_t v = 100000 + rng.below(bal / 2);
                    emit({{from, v + kStdFee}}, {{to, v}});
                    break;
                }
                case 3: {  // user deposit into an exchange
                    if (user_addrs.empty()) break;
                    const std::string& from = user_addrs[rng.below(user_addrs.size())];
                    uint64_t bal = balance[from];
                    if (bal < 200000) break;
                    uint64_t v = 100000 + rng.below(bal / 2);
                    const std::string& to = exchange_addrs[rng.below(exchange_addrs.size())];
                    emit({{from, v + kStdFee}}, {{to, v}});
                    break;
                }
                case 4:
                case 5:
                case 6: {  // exchange consolidation: multi-input co-spend
                    if (exchange_addrs.empty() || per_exchange < 2) break;
                    std::size_t xi = rng.below(exchange_addrs.size());
                    std::size_t e = exchange_of(xi);
                    std::vector<Slot> ins;
                    uint64_t total = 0;
                    std::size_t n = 4 + rng.below(5);
                    for (std::size_t k = 0; k < n; ++k) {
                        const std::string& a =
                            exchange_addrs[e * per_exchange + rng.below(per_exchange)];
                        uint64_t v = kCoin + rng.below(4 * kCoin);
                        ins.push_back({a, v});
                        total += v;
                    }
                    if (ins.size() < 2) break;
                    emit(ins, {{ins[0].addr, total - kStdFee}});
                    break;
                }
                default: {  // exchange payout batch
                    if (exchange_addrs.empty() || user_addrs.empty()) break;
                    std::size_t xi = rng.below(exchange_addrs.size());
                    std::vector<Slot> outs;
                    uint64_t total = 0;
                    std::size_t n = 2 + rng.below(4);
                    for (std::size_t k = 0; k < n; ++k) {
                        uint64_t v = 1000000 + rng.below(20000000);
                        outs.push_back({user_addrs[rng.below(user_addrs.size())], v});
                        total += v;
                    }
                    outs.push_back({exchange_addrs[xi], 10 * kCoin});  // change
                    emit({{exchange_addrs[xi], total + 10 * kCoin + kStdFee}}, outs);
                    break;
                }
            }
        }
        next_block();

        // Sweep every exchange address into its exchange cluster.
        for (std::size_t e = 0; e < spec.exchanges; ++e) {
            for (std::size_t a = 0; a + 1 < per_exchange; a += 4) {
                std::vector<Slot> ins;
                uint64_t total = 0;
                for (std::size_t k = a; k < std::min(a + 5, per_exchange); ++k) {
                    const std::string& addr = exchange_addrs[e * per_exchange + k];
                    uint64_t v = std::max<uint64_t>(balance[addr] / 4, kCoin);
                    ins.push_back({addr, v});
                    total += v;
                }
                if (ins.size() >= 2)
                    emit(ins, {{exchange_addrs[e * per_exchange], total - kStdFee}});
            }
        }
        next_block();
    }

    void build_cerber() {
        for (std::size_t i = 0; i < spec.cerber_addresses; ++i) {
            std::string sig = new_addr("cs");
            cerber.push_back(sig);
            grant(sig, 100 * kCoin);
            next_block();
            for (std::size_t c = 0; c < spec.cycles_per_cerber; ++c) {
                std::string temp = new_addr("ct");
                uint64_t x = kCoin + rng.below(kCoin);
                emit({{sig, x + kStdFee}}, {{temp, x}});
                next_block();
                emit({{temp, x}}, {{sig, x - kStdFee}});
                next_block();
            }
        }
    }

    void build_pony() {
        for (std::size_t i = 0; i < spec.pony_addresses; ++i) {
            std::string sig = new_addr("ps");
            pony.push_back(sig);
            std::string funder = new_addr("pf");
            grant(funder, 100 * kCoin);
            next_block();
            for (std::size_t p = 0; p < spec.pairs_per_pony; ++p) {
                IPv4 ip;
                do {
                    ip.a = static_cast<uint8_t>(1 + rng.below(223));
                    ip.b = static_cast<uint8_t>(rng.below(256));
                    ip.c = static_cast<uint8_t>(rng.below(256));
                    ip.d = static_cast<uint8_t>(rng.below(256));
                } while (!is_public(ip));
                uint64_t v1 = (static_cast<uint64_t>(ip.a) << 8) | ip.b;
                uint64_t v2 = (static_cast<uint64_t>(ip.c) << 8) | ip.d;
                emit({{funder, v1 + kStdFee}}, {{sig, v1}});
                next_block();
                emit({{funder, v2 + kStdFee}}, {{sig, v2}});
                next_block();
            }
        }
    }

    void build_glupteba(const std::vector<uint8_t>& key) {
        for (std::size_t i = 0; i < spec.glupteba_addresses; ++i) {
            std::string sig = new_addr("gs");
            glupteba.push_back(sig);
            grant(sig, 100 * kCoin);
            next_block();
            for (std::size_t p = 0; p < spec.payloads_per_glupteba; ++p) {
                std::string domain = "c2-" + std::to_string(addr_counter) + "-" +
                                     std::to_string(p) + ".example.net";
                std::vector<uint8_t> iv(12);
                for (auto& b : iv) b = static_cast<uint8_t>(rng.below(256));
                std::vector<uint8_t> tag;
                std::vector<uint8_t> plain(domain.begin(), domain.end());
                std::vector<uint8_t> cipher = aes_gcm_encrypt(iv, plain, key, tag);
                std::vector<uint8_t> blob = iv;
                blob.insert(blob.end(), cipher.begin(), cipher.end());
                blob.insert(blob.end(), tag.begin(), tag.end());
                uint64_t v = kCoin + rng.below(kCoin);
                std::string sink = new_addr("gk");
                emit({{sig, v + kStdFee}}, {{sink, v}}, {hex_encode(blob)});
                next_block();
            }
        }
    }

    void build_dust() {
        for (std::size_t i = 0; i < spec.dust_txes + spec.near_dust_txes; ++i) {
            bool near = i >= spec.dust_txes;
            std::size_t n_outs = near ? spec.dust_outputs - 1 : spec.dust_outputs;
            std::string attacker = new_addr("da");
            grant(attacker, 100 * kCoin);
            next_block();
            std::vector<Slot> outs;
            for (std::size_t k = 0; k < n_outs; ++k) {
                const std::string& victim =
                    user_addrs.empty() ? new_addr("dv")
                                       : user_addrs[rng.below(user_addrs.size())];
                outs.push_back({victim, 546});
            }
            std::string txid = emit({{attacker, 546 * n_outs + kStdFee}}, outs);
            (near ? near_dust_txids : dust_txids).push_back(txid);
            next_block();
        }
    }

    void build_coinjoin() {
        for (std::size_t i = 0; i < spec.coinjoin_txes; ++i) {
            std::size_t n = 5;
            std::vector<Slot> ins, outs;
            uint64_t v_equal = 10 * kCoin;
            for (std::size_t k = 0; k < n; ++k) {
                std::string p = new_addr("cj");
                grant(p, 20 * kCoin);
                ins.push_back({p, 12 * kCoin});
                outs.push_back({new_addr("co"), v_equal});
            }
            next_block();
            for (std::size_t k = 0; k + 1 < n; ++k)
                outs.push_back({new_addr("cc"), 2 * kCoin - (k + 1) * 1000});
            coinjoin_txids.push_back(emit(ins, outs));
            next_block();
        }
    }

    // seed -> hops -> tagged service entity; optionally also entity -> seed.
    void build_relations() {
        static const char* categories[] = {"mixer", "tormarket", "gambling", "payment"};
        std::size_t entity_n = 0;
        for (std::size_t s = 0; s < spec.relation_seeds; ++s) {
            std::string seed = new_addr("sd");
            seeds.push_back(seed);
            tag_rows.emplace_back(seed, "clipper:campaign");
            grant(seed, 1000 * kCoin);
            next_block();
            for (std::size_t r = 0; r < spec.relations_per_seed; ++r) {
                std::string target = new_addr("tg");
                std::string cat = categories[entity_n % 4];
                tag_rows.emplace_back(target, cat + (":entity" + std::to_string(entity_n)));
                ordered_json rel;
                rel["seed"] = seed;
                rel["tag"] = cat + (":entity" + std::to_string(entity_n));
                rel["direction"] = "seed-to-entity";
                planted_relations.push_back(rel);
                ++entity_n;
                uint64_t v = 10 * kCoin + rng.below(kCoin);
                std::string cur = seed;
                for (std::size_t h = 0; h < spec.relation_hops; ++h) {
                    std::string next = new_addr("ri");
                    emit({{cur, v}}, {{next, v - kStdFee}});
                    skip_blocks(36 + static_cast<uint32_t>(rng.below(400)));
                    cur = next;
                    v -= kStdFee;
                }
                emit({{cur, v}}, {{target, v - kStdFee}});
                next_block();
            }
            if (spec.relation_backward_paths) {
                for (std::size_t r = 0; r < spec.relations_per_seed; ++r) {
                    std::string source = new_addr("tg");
                    std::string cat = categories[entity_n % 4];
                    tag_rows.emplace_back(source, cat + (":entity" + std::to_string(entity_n)));
                    ordered_json rel;
                    rel["seed"] = seed;
                    rel["tag"] = cat + (":entity" + std::to_string(entity_n));
                    rel["direction"] = "entity-to-seed";
                    planted_relations.push_back(rel);
                    ++entity_n;
                    grant(source, 100 * kCoin);
                    next_block();
                    uint64_t v = 5 * kCoin + rng.below(kCoin);
                    std::string cur = source;
                    for (std::size_t h = 0; h < spec.relation_hops; ++h) {
                        std::string next = new_addr("rj");
                        emit({{cur, v}}, {{next, v - kStdFee}});
                        skip_blocks(36 + static_cast<uint32_t>(rng.below(400)));
                        cur = next;
                        v -= kStdFee;
                    }
                    emit({{cur, v}}, {{seed, v - kStdFee}});
                    next_block();
                }
            }
        }
    }

    // Untagged exchange-like hubs one hop behind the seeds. Exploring them
    // without the classifier blows the graph up; tagged foreign entities
    // hide behind them.
    void build_hubs() {
        std::size_t foreign_n = 0;
        for (std::size_t hi = 0; hi < spec.hubs; ++hi) {
            std::string hub = new_addr("hb");
            hub_addrs.push_back(hub);
            grant(hub, 100000 * kCoin);
            next_block();
            if (!seeds.empty()) {
                const std::string& seed = seeds[hi % seeds.size()];
                std::string link = new_addr("hl");
                uint64_t v = 2 * kCoin;
                emit({{seed, v + kStdFee}}, {{link, v}});
                skip_blocks(36 + static_cast<uint32_t>(rng.below(400)));
                emit({{link, v}}, {{hub, v - kStdFee}});
                next_block();
            }
            // Deposits from one-off payers give the hub exchange-scale
            // deposit counts.
            for (std::size_t d = 0; d < spec.hub_payouts * 3; ++d) {
                std::string payer = new_addr("hp");
                grant(payer, 3 * kCoin);
                emit({{payer, kCoin + rng.below(kCoin)}}, {{hub, kCoin / 2}});
            }
            next_block();
            for (std::size_t p = 0; p < spec.hub_payouts; ++p) {
                std::vector<Slot> outs;
                uint64_t total = 0;
                for (std::size_t k = 0; k < spec.hub_fanout; ++k) {
                    uint64_t v = 1000000 + 137 * k + rng.below(1000000);
                    outs.push_back({new_addr("ho"), v});
                    total += v;
                }
                emit({{hub, total + kStdFee}}, outs);
                next_block();
            }
            for (std::size_t f = 0; f < spec.foreign_tags_per_hub; ++f) {
                std::string target = new_addr("ft");
                tag_rows.emplace_back(target,
                                      "tormarket:foreign" + std::to_string(foreign_n++));
                emit({{hub, 3 * kCoin + kStdFee}}, {{target, 3 * kCoin}});
                next_block();
            }
        }
    }
};

}  // namespace

SynthResult generate_chain(const SynthSpec& spec) {
    Builder b(spec);

    std::vector<uint8_t> key;
    std::string key_hex = spec.glupteba_key_hex;
    if (spec.glupteba_addresses) {
        if (key_hex.empty())
            key_hex = sha256_hex("glupteba-key:" + std::to_string(spec.rng_seed));
        key = hex_decode(key_hex);
        if (key.size() != 32) throw Error("glupteba key must be 32 bytes of hex");
    }

    if (spec.two_seed_example) b.emit_two_seed_example();
    b.build_background();
    b.build_cerber();
    b.build_pony();
    b.build_glupteba(key);
    b.build_dust();
    b.build_coinjoin();
    b.build_relations();
    b.build_hubs();

    SynthResult result;
    result.chain_jsonl = b.chain;

    ordered_json m;
    m["format"] = "txtrace-synth-manifest";
    m["version"] = 1;
    m["rng_seed"] = spec.rng_seed;
    m["spec"] = ordered_json::parse(spec.to_json());
    m["user_addresses"] = b.user_addrs;
    m["exchange_addresses"] = b.exchange_addrs;
    m["hub_addresses"] = b.hub_addrs;
    m["seeds"] = b.seeds;
    m["cerber_signaling"] = b.cerber;
    m["pony_signaling"] = b.pony;
    m["glupteba_signaling"] = b.glupteba;
    m["glupteba_key_hex"] = key_hex;
    m["dust_txids"] = b.dust_txids;
    m["near_dust_txids"] = b.near_dust_txids;
    m["coinjoin_txids"] = b.coinjoin_txids;
    m["planted_relations"] = b.planted_relations;
    result.manifest_json = m.dump(2) + "\n";

    std::string tags = "address,class,category,label,subtype,urls,trust\n";
    std::sort(b.tag_rows.begin(), b.tag_rows.end());
    for (const auto& [addr, tag] : b.tag_rows) {
        auto parts = split(tag, ':');
        tags += addr + "," + to_string(*category_class(parts[0])) + "," + parts[0] + "," +
                parts[1] + ",,,trusted\n";
    }
    result.tags_csv = tags;

    std::string seed_txt = "# synthetic campaign seeds\n";
    for (const auto& s : b.seeds) seed_txt += s + "\n";
    result.seeds_txt = seed_txt;
    return result;
}

}  // namespace txtrace
