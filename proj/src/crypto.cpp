#include "txtrace/crypto.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <memory>
#include <sstream>

#include "txtrace/errors.hpp"
#include "txtrace/util.hpp"

namespace txtrace {

std::vector<uint8_t> hex_decode(std::string_view hex) {
    if (hex.size() % 2 != 0) throw MalformedHex("odd-length hex string");
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        return -1;
    };
    std::vector<uint8_t> out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        int hi = nibble(hex[2 * i]);
        int lo = nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) throw MalformedHex("non-hex character");
        out[i] = static_cast<uint8_t>((hi << 4) | lo);
    }
    return out;
}

std::string hex_encode(const std::vector<uint8_t>& bytes) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (uint8_t b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t prev = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            std::size_t cur = row[j];
            std::size_t sub = prev + (a[i - 1] == b[j - 1] ? 0 : 1);
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, sub});
            prev = cur;
        }
    }
    return row[b.size()];
}

std::string normalize_label(std::string_view label) {
    std::string out;
    for (char c : label) {
        if (c == ' ' || c == '.' || c == '_' || c == '-' || c == '/') continue;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.emplace_back(s.substr(start));
            return parts;
        }
        parts.emplace_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("short write to " + path);
}

namespace {
struct CtxDeleter {
    void operator()(EVP_CIPHER_CTX* p) const { EVP_CIPHER_CTX_free(p); }
};
using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CtxDeleter>;
}  // namespace

std::optional<std::vector<uint8_t>> aes_gcm_decrypt(const std::vector<uint8_t>& iv,
                                                    const std::vector<uint8_t>& ciphertext,
                                                    const std::vector<uint8_t>& tag,
                                                    const std::vector<uint8_t>& key) {
    if (key.size() != 32 || iv.size() != 12 || tag.size() != 16) return std::nullopt;
    CipherCtx ctx(EVP_CIPHER_CTX_new());
    if (!ctx) return std::nullopt;
    if (EVP_DecryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(), iv.data()) != 1)
        return std::nullopt;
    std::vector<uint8_t> plain(ciphertext.size());
    int len = 0;
    if (!ciphertext.empty() &&
        EVP_DecryptUpdate(ctx.get(), plain.data(), &len, ciphertext.data(),
                          static_cast<int>(ciphertext.size())) != 1)
        return std::nullopt;
    int total = len;
    if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, 16,
                            const_cast<uint8_t*>(tag.data())) != 1)
        return std::nullopt;
    if (EVP_DecryptFinal_ex(ctx.get(), plain.data() + total, &len) != 1)
        return std::nullopt;  // authentication failure
    total += len;
    plain.resize(static_cast<std::size_t>(total));
    return plain;
}

std::vector<uint8_t> aes_gcm_encrypt(const std::vector<uint8_t>& iv,
                                     const std::vector<uint8_t>& plaintext,
                                     const std::vector<uint8_t>& key,
                                     std::vector<uint8_t>& tag_out) {
    if (key.size() != 32 || iv.size() != 12) throw Error("aes_gcm_encrypt: bad key/iv size");
    CipherCtx ctx(EVP_CIPHER_CTX_new());
    if (!ctx) throw Error("aes_gcm_encrypt: ctx alloc failed");
    if (EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(), iv.data()) != 1)
        throw Error("aes_gcm_encrypt: init failed");
    std::vector<uint8_t> cipher(plaintext.size());
    int len = 0;
    if (!plaintext.empty() &&
        EVP_EncryptUpdate(ctx.get(), cipher.data(), &len, plaintext.data(),
                          static_cast<int>(plaintext.size())) != 1)
        throw Error("aes_gcm_encrypt: update failed");
    int total = len;
    if (EVP_EncryptFinal_ex(ctx.get(), cipher.data() + total, &len) != 1)
        throw Error("aes_gcm_encrypt: final failed");
    total += len;
    cipher.resize(static_cast<std::size_t>(total));
    tag_out.resize(16);
    if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, 16, tag_out.data()) != 1)
        throw Error("aes_gcm_encrypt: tag fetch failed");
    return cipher;
}

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int digest_len = 0;
    EVP_Digest(data.data(), data.size(), digest, &digest_len, EVP_sha256(), nullptr);
    return hex_encode(std::vector<uint8_t>(digest, digest + digest_len));
}

std::string sha256_file_hex(const std::string& path) {
    return sha256_hex(read_file(path));
}

}  // namespace txtrace
