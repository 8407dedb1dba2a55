#include <doctest.h>

#include "test_util.hpp"
#include "txtrace/crypto.hpp"
#include "txtrace/oracles.hpp"
#include "txtrace/util.hpp"

using namespace txtrace;
using txtest::ChainBuilder;

namespace {

// Cerber round trip: S sends x to a temporary address which returns
// x minus the 0.001 BTC fee.
ChainBuilder cerber_fixture(uint64_t return_delta = 0) {
    ChainBuilder b;
    b.add({}, {{"S", 1000000000}});
    b.add({{"S", 200000000}}, {{"dmn123tmp", 199900000}}, "c1");
    b.add({{"dmn123tmp", 199900000}}, {{"S", 199800000 + return_delta}}, "c2");
    return b;
}

std::vector<uint8_t> test_key() {
    return hex_decode("000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f");
}

std::string glupteba_payload(const std::string& domain, const std::vector<uint8_t>& key) {
    std::vector<uint8_t> iv(12, 0xab);
    std::vector<uint8_t> tag;
    std::vector<uint8_t> plain(domain.begin(), domain.end());
    std::vector<uint8_t> cipher = aes_gcm_encrypt(iv, plain, key, tag);
    std::vector<uint8_t> blob = iv;
    blob.insert(blob.end(), cipher.begin(), cipher.end());
    blob.insert(blob.end(), tag.begin(), tag.end());
    return hex_encode(blob);
}

}  // namespace

TEST_CASE("aes-gcm-256 reference vectors (McGrew-Viega test cases 13/14)") {
    std::vector<uint8_t> key(32, 0);
    std::vector<uint8_t> iv(12, 0);

    // empty plaintext: tag only
    std::vector<uint8_t> tag13 = hex_decode("530f8afbc74536b9a963b4f1c4cb738b");
    auto empty = aes_gcm_decrypt(iv, {}, tag13, key);
    REQUIRE(empty.has_value());
    CHECK(empty->empty());

    // 16 zero bytes
    std::vector<uint8_t> cipher14 = hex_decode("cea7403d4d606b6e074ec5d3baf39d18");
    std::vector<uint8_t> tag14 = hex_decode("d0d1c8a799996bf0265b98b5d48ab919");
    auto plain14 = aes_gcm_decrypt(iv, cipher14, tag14, key);
    REQUIRE(plain14.has_value());
    CHECK(*plain14 == std::vector<uint8_t>(16, 0));

    // wrong tag fails authentication
    tag14[0] ^= 1;
    CHECK_FALSE(aes_gcm_decrypt(iv, cipher14, tag14, key).has_value());
}

TEST_CASE("cerber oracle accepts the planted cycle") {
    ChainStore store = cerber_fixture().store();
    OracleResult r = cerber_oracle(store, "S");
    CHECK(r.is_signaling);
    REQUIRE(r.evidence.size() == 1);
    CHECK(r.evidence[0].payload == "dmn123");  // first six characters
}

TEST_CASE("cerber rejects forwards to a third address") {
    ChainBuilder b;
    b.add({}, {{"S", 1000000000}});
    b.add({{"S", 200000000}}, {{"T", 199900000}});
    b.add({{"T", 199900000}}, {{"U", 199800000}});  // not returned to S
    CHECK_FALSE(cerber_oracle(b.store(), "S").is_signaling);
}

TEST_CASE("cerber exactness: one satoshi breaks the cycle") {
    CHECK(cerber_oracle(cerber_fixture(0).store(), "S").is_signaling);
    // exact-equality check per the return-value rule
    ChainBuilder low;
    low.add({}, {{"S", 1000000000}});
    low.add({{"S", 200000000}}, {{"dmn123tmp", 199900000}});
    low.add({{"dmn123tmp", 199899999}}, {{"S", 199799999}});
    CHECK_FALSE(cerber_oracle(low.store(), "S").is_signaling);
}

TEST_CASE("cerber requires a temporary address") {
    // recipient with two deposits is not temporary
    ChainBuilder b;
    b.add({}, {{"S", 1000000000}});
    b.add({}, {{"T", 50}});
    b.add({{"S", 200000000}}, {{"T", 199900000}});
    b.add({{"T", 199900000}}, {{"S", 199800000}});
    CHECK_FALSE(cerber_oracle(b.store(), "S").is_signaling);
}

TEST_CASE("pony ip decoding") {
    PonyCodecParams codec;
    IPv4 ip = decode_ip(2056, 1028, codec);
    CHECK(ip.str() == "8.8.4.4");
    CHECK(decode_ip(0, 0, codec).str() == "0.0.0.0");
    // low-16 masking
    CHECK(decode_ip(65536 + 2056, 1028, codec).str() == "8.8.4.4");
}

TEST_CASE("public ip ranges") {
    auto ip = [](int a, int b, int c, int d) {
        return IPv4{static_cast<uint8_t>(a), static_cast<uint8_t>(b),
                    static_cast<uint8_t>(c), static_cast<uint8_t>(d)};
    };
    CHECK(is_public(ip(8, 8, 8, 8)));
    CHECK_FALSE(is_public(ip(10, 1, 2, 3)));
    CHECK_FALSE(is_public(ip(0, 0, 0, 0)));
    CHECK_FALSE(is_public(ip(100, 64, 0, 1)));
    CHECK_FALSE(is_public(ip(100, 127, 255, 1)));
    CHECK(is_public(ip(100, 128, 0, 1)));
    CHECK_FALSE(is_public(ip(127, 0, 0, 1)));
    CHECK_FALSE(is_public(ip(169, 254, 9, 9)));
    CHECK_FALSE(is_public(ip(172, 16, 0, 1)));
    CHECK_FALSE(is_public(ip(172, 31, 1, 1)));
    CHECK(is_public(ip(172, 32, 1, 1)));
    CHECK_FALSE(is_public(ip(192, 168, 1, 1)));
    CHECK(is_public(ip(192, 167, 1, 1)));
    CHECK_FALSE(is_public(ip(224, 0, 0, 251)));
    CHECK_FALSE(is_public(ip(255, 255, 255, 255)));
}

TEST_CASE("pony oracle on a planted pair") {
    ChainBuilder b;
    b.add({}, {{"F", 1000000000}});
    b.add({{"F", 3000}}, {{"P", 2056}});  // 8.8
    b.add({{"F", 2000}}, {{"P", 1028}});  // 4.4, ten minutes later
    ChainStore store = b.store();
    OracleResult r = pony_oracle(store, "P");
    CHECK(r.is_signaling);
    REQUIRE(r.evidence.size() == 1);
    CHECK(r.evidence[0].payload == "8.8.4.4");
    CHECK(*r.ratio == doctest::Approx(1.0));
}

TEST_CASE("pony rejects private ips") {
    ChainBuilder b;
    b.add({}, {{"F", 1000000000}});
    b.add({{"F", 50000}}, {{"P", 49320}});  // 192.168
    b.add({{"F", 2000}}, {{"P", 257}});     // 1.1
    OracleResult r = pony_oracle(b.store(), "P");
    CHECK_FALSE(r.is_signaling);
    CHECK(r.evidence.empty());
}

TEST_CASE("pony resets on withdrawals between deposits") {
    ChainBuilder b;
    b.add({}, {{"F", 1000000000}});
    b.add({{"F", 3000}}, {{"P", 2056}});
    b.add({{"P", 2056}}, {{"X", 1000}});  // withdrawal resets the pending tx
    b.add({{"F", 2000}}, {{"P", 1028}});
    OracleResult r = pony_oracle(b.store(), "P");
    CHECK(r.evidence.empty());
    CHECK_FALSE(r.is_signaling);
}

TEST_CASE("pony resets on shape violations and the window") {
    SUBCASE("too many inputs") {
        ChainBuilder b;
        b.add({}, {{"F", 1000000000}});
        b.add({{"F", 1000}, {"F2", 1000}, {"F3", 1000}, {"F4", 1000}}, {{"P", 2056}});
        b.add({{"F", 2000}}, {{"P", 1028}});
        CHECK(pony_oracle(b.store(), "P").evidence.empty());
    }
    SUBCASE("pair outside one hour") {
        ChainBuilder b;
        b.add({}, {{"F", 1000000000}});
        b.add({{"F", 3000}}, {{"P", 2056}});
        b.time += 3600;  // next deposit lands 4200 s after the first
        b.add({{"F", 2000}}, {{"P", 1028}});
        OracleResult r = pony_oracle(b.store(), "P");
        CHECK(r.evidence.empty());
    }
    SUBCASE("ratio gate on a high-volume address") {
        ChainBuilder b;
        b.add({}, {{"F", 1000000000}});
        // one valid pair
        b.add({{"F", 3000}}, {{"P", 2056}});
        b.add({{"F", 2000}}, {{"P", 1028}});
        // six more deposits that never pair up (withdrawals between them)
        for (int i = 0; i < 6; ++i) {
            b.add({{"F", 5000}}, {{"P", 3000 + static_cast<uint64_t>(i)}});
            b.add({{"P", 1000}}, {{"X", 900}});
        }
        OracleResult r = pony_oracle(b.store(), "P");
        CHECK(r.evidence.size() == 1);
        CHECK(*r.ratio == doctest::Approx(2.0 / 8));
        CHECK_FALSE(r.is_signaling);  // 0.25 < 0.5
    }
}

TEST_CASE("pony reset destroys exactly the interrupted pair") {
    // three pairs; a withdrawal lands inside the second one
    ChainBuilder b;
    b.add({}, {{"F", 1000000000}});
    b.add({{"F", 3000}}, {{"P", 2056}});
    b.add({{"F", 2000}}, {{"P", 1028}});  // pair 1 complete
    b.add({{"F", 3000}}, {{"P", 2057}});
    b.add({{"P", 2056}}, {{"X", 1000}});  // reset inside pair 2
    b.add({{"F", 2000}}, {{"P", 1029}});
    b.add({{"F", 3000}}, {{"P", 2058}});
    b.add({{"F", 2000}}, {{"P", 1030}});
    OracleResult r = pony_oracle(b.store(), "P");
    // pair 1 survives; the deposit after the reset re-pairs with the next
    // one (1029 then 2058), exactly one pair is lost
    REQUIRE(r.evidence.size() == 2);
    CHECK(r.evidence[0].payload == "8.8.4.4");
    CHECK(r.evidence[1].payload == "4.5.8.10");
    CHECK(*r.ratio == doctest::Approx(2.0 * 2 / 6));
    CHECK(r.is_signaling);  // 0.667 over the gate
}

TEST_CASE("glupteba oracle decrypts the planted payload") {
    auto key = test_key();
    ChainBuilder b;
    b.add({}, {{"G", 1000000000}});
    b.add({{"G", 100000000}}, {{"sink", 99900000}}, "",
          {glupteba_payload("my.test.domain", key)});
    ChainStore store = b.store();

    GluptebaParams params;
    params.keys = {key};
    OracleResult r = glupteba_oracle(store, "G", params);
    CHECK(r.is_signaling);
    REQUIRE(r.evidence.size() == 1);
    CHECK(r.evidence[0].payload == "my.test.domain");

    SUBCASE("wrong key fails authentication") {
        GluptebaParams wrong;
        wrong.keys = {std::vector<uint8_t>(32, 0x77)};
        CHECK_FALSE(glupteba_oracle(store, "G", wrong).is_signaling);
    }
    SUBCASE("second key in the list still matches") {
        GluptebaParams multi;
        multi.keys = {std::vector<uint8_t>(32, 0x77), key};
        CHECK(glupteba_oracle(store, "G", multi).is_signaling);
    }
}

TEST_CASE("glupteba length gate rejects 54 hex chars") {
    auto key = test_key();
    std::string short_payload(54, 'a');
    ChainBuilder b;
    b.add({}, {{"G", 1000000000}});
    b.add({{"G", 100000000}}, {{"sink", 99900000}}, "", {short_payload});
    GluptebaParams params;
    params.keys = {key};
    CHECK_FALSE(glupteba_oracle(b.store(), "G", params).is_signaling);
}

TEST_CASE("glupteba authentication: any ciphertext bit flip kills the match") {
    auto key = test_key();
    std::string payload = glupteba_payload("c2.example.org", key);
    GluptebaParams params;
    params.keys = {key};
    for (std::size_t bit = 0; bit < payload.size() * 4; ++bit) {
        std::string flipped = payload;
        std::size_t pos = bit / 4;
        int nibble_bit = static_cast<int>(bit % 4);
        auto hexval = [](char c) { return c <= '9' ? c - '0' : c - 'a' + 10; };
        int v = hexval(flipped[pos]) ^ (1 << nibble_bit);
        flipped[pos] = v < 10 ? static_cast<char>('0' + v) : static_cast<char>('a' + v - 10);
        ChainBuilder b;
        b.add({}, {{"G", 1000000000}});
        b.add({{"G", 100000000}}, {{"sink", 99900000}}, "", {flipped});
        GluptebaParams p = params;
        p.strict = true;  // isolate GCM integrity from the hostname guard
        CHECK_FALSE(glupteba_oracle(b.store(), "G", p).is_signaling);
    }
}

TEST_CASE("glupteba hostname guard vs strict mode") {
    auto key = test_key();
    // random-looking binary plaintext: authenticated but not hostname-shaped
    std::string binary(28, '\x01');
    binary[5] = '\xff';
    ChainBuilder b;
    b.add({}, {{"G", 1000000000}});
    b.add({{"G", 100000000}}, {{"sink", 99900000}}, "", {glupteba_payload(binary, key)});
    ChainStore store = b.store();
    GluptebaParams guard;
    guard.keys = {key};
    OracleResult guarded = glupteba_oracle(store, "G", guard);
    CHECK_FALSE(guarded.is_signaling);
    CHECK(guarded.suppressed_non_hostname == 1);
    GluptebaParams strict = guard;
    strict.strict = true;
    CHECK(glupteba_oracle(store, "G", strict).is_signaling);
}

TEST_CASE("oracle purity: repeated calls are identical") {
    ChainStore store = cerber_fixture().store();
    OracleResult a = cerber_oracle(store, "S");
    OracleResult b = cerber_oracle(store, "S");
    CHECK(a.is_signaling == b.is_signaling);
    REQUIRE(a.evidence.size() == b.evidence.size());
    CHECK(a.evidence[0].payload == b.evidence[0].payload);
    CHECK(a.evidence[0].txid == b.evidence[0].txid);
}

TEST_CASE("oracle registry maps skidmap to the pony oracle") {
    OracleRegistry registry;
    registry.register_family("skidmap", "");
    registry.register_family("cerber", "");
    CHECK(registry.oracles.count("skidmap") == 1);
    ChainBuilder b;
    b.add({}, {{"F", 1000000000}});
    b.add({{"F", 3000}}, {{"P", 2056}});
    b.add({{"F", 2000}}, {{"P", 1028}});
    ChainStore store = b.store();
    CHECK(registry.oracles.at("skidmap")(store, "P").is_signaling);
    CHECK_THROWS(registry.register_family("unknown-family", ""));
}
